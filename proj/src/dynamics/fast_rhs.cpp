#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "sscool/dynamics/evolve.hpp"
#include "sscool/model/operators.hpp"
#include "sscool/numkit/linalg.hpp"

namespace sscool::dynamics {

using numkit::ComplexMatrix;
using numkit::cplx;

namespace {

// Dense storage with per-row column ranges; everything outside the scanned band
// of the source matrix is skipped during products.
struct BandedBlock {
  std::size_t n = 0;
  bool present = false;
  std::vector<cplx> a;
  std::vector<std::size_t> lo, hi;  // per-row column range [lo, hi)

  void build(const ComplexMatrix& m, double drop) {
    n = m.rows;
    a = m.a;
    lo.assign(n, 0);
    hi.assign(n, 0);
    present = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t first = n, last = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(m(i, j)) > drop) {
          if (first == n) first = j;
          last = j + 1;
        }
      if (first < n) {
        lo[i] = first;
        hi[i] = last;
        present = true;
      }
    }
  }
};

// C = A * B, n x n row-major. Row-parallel with a fixed inner order, so the
// result does not depend on the thread count.
void real_gemm(const std::vector<double>& A, const std::vector<double>& B, std::vector<double>& C,
               std::size_t n) {
  C.resize(n * n);
#pragma omp parallel for schedule(static) if (n >= 48)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    double* crow = C.data() + i * n;
    std::fill(crow, crow + n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = A[i * n + k];
      if (aik == 0.0) continue;
      const double* brow = B.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

class FastRhs final : public CompiledRhs {
 public:
  std::size_t n = 0;  // motional dimension; dim = 2n
  bool rotating = false;
  double nu = 0.0;
  model::JumpStructure structure = model::JumpStructure::InternalStatic;
  BandedBlock blocks[2][2];  // effective (non-Hermitian) Hamiltonian, internal blocks

  // displacement-family gain: position eigenbasis and the cosine kernel
  std::vector<double> q, qt, ghad;
  // static internal gain: t4[s][s'][r][r'] = sum_c A_c(s,r) conj(A_c(s',r'))
  cplx t4[2][2][2][2] = {};

  // eval is not reentrant: scratch is reused across calls (one instance per run)
  mutable std::vector<cplx> rho_, m_, out_, ph_;
  mutable std::vector<double> re_, im_, t1_, s_re_, s_im_, g_re_, g_im_;

  bool rotating_frame() const override { return rotating; }
  void eval(double t, const double* y, double* dydt) const override;
};

void FastRhs::eval(double t, const double* y, double* dydt) const {
  const std::size_t d = dim, nn = n, dd = d * d;
  rho_.resize(dd);
  m_.assign(dd, cplx(0.0));
  out_.resize(dd);
  for (std::size_t k = 0; k < dd; ++k) rho_[k] = cplx(y[k], y[dd + k]);

  if (rotating) {
    ph_.resize(nn);
    for (std::size_t m = 0; m < nn; ++m) ph_[m] = std::polar(1.0, nu * t * static_cast<double>(m));
  }

  // M = H_eff(t) rho; frame phases dress each band entry by e^{i nu t (row - col)}.
#pragma omp parallel for schedule(static) if (nn >= 48)
  for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(d); ++gi) {
    const std::size_t s = static_cast<std::size_t>(gi) / nn;
    const std::size_t mr = static_cast<std::size_t>(gi) % nn;
    cplx* mrow = m_.data() + static_cast<std::size_t>(gi) * d;
    for (std::size_t r = 0; r < 2; ++r) {
      const BandedBlock& b = blocks[s][r];
      if (!b.present) continue;
      for (std::size_t k = b.lo[mr]; k < b.hi[mr]; ++k) {
        cplx w = b.a[mr * nn + k];
        if (w == cplx(0.0)) continue;
        if (rotating) w *= ph_[mr] * std::conj(ph_[k]);
        const cplx* src = rho_.data() + (r * nn + k) * d;
        for (std::size_t j = 0; j < d; ++j) mrow[j] += w * src[j];
      }
    }
  }

  // -i (M - M^dag): Hermitian by construction, entry pair by entry pair.
#pragma omp parallel for schedule(static) if (nn >= 48)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(d); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < d; ++j) {
      const cplx v = cplx(0.0, -1.0) * (m_[i * d + j] - std::conj(m_[j * d + i]));
      out_[i * d + j] = v;
      out_[j * d + i] = std::conj(v);
    }
  }

  if (structure == model::JumpStructure::AngularFamily) {
    // Feeding term on the ground block: sum_j rate_j D_j rho_ee D_j^dag, evaluated
    // in the shared eigenbasis of (a + a^dag) as an entrywise cosine kernel.
    re_.resize(nn * nn);
    im_.resize(nn * nn);
    for (std::size_t m = 0; m < nn; ++m)
      for (std::size_t k = 0; k < nn; ++k) {
        cplx v = rho_[(nn + m) * d + (nn + k)];
        if (rotating) v *= std::conj(ph_[m]) * ph_[k];
        re_[m * nn + k] = v.real();
        im_[m * nn + k] = v.imag();
      }
    real_gemm(re_, q, t1_, nn);
    real_gemm(qt, t1_, s_re_, nn);
    real_gemm(im_, q, t1_, nn);
    real_gemm(qt, t1_, s_im_, nn);
    for (std::size_t k = 0; k < nn * nn; ++k) {
      s_re_[k] *= ghad[k];
      s_im_[k] *= ghad[k];
    }
    real_gemm(s_re_, qt, t1_, nn);
    real_gemm(q, t1_, g_re_, nn);
    real_gemm(s_im_, qt, t1_, nn);
    real_gemm(q, t1_, g_im_, nn);
#pragma omp parallel for schedule(static) if (nn >= 48)
    for (std::ptrdiff_t mm = 0; mm < static_cast<std::ptrdiff_t>(nn); ++mm) {
      const std::size_t m = static_cast<std::size_t>(mm);
      for (std::size_t k = m; k < nn; ++k) {
        cplx g1 = cplx(g_re_[m * nn + k], g_im_[m * nn + k]);
        cplx g2 = cplx(g_re_[k * nn + m], g_im_[k * nn + m]);
        if (rotating) {
          const cplx f = ph_[m] * std::conj(ph_[k]);
          g1 *= f;
          g2 *= std::conj(f);
        }
        const cplx v = 0.5 * (g1 + std::conj(g2));
        out_[m * d + k] += v;
        if (k != m) out_[k * d + m] += std::conj(v);
      }
    }
  } else {
    // Static internal jumps (X ⊗ I): motional indices ride along, so the feeding
    // term is a 2x2-block recombination at fixed (m, k). Frame phases cancel.
#pragma omp parallel for schedule(static) if (nn >= 48)
    for (std::ptrdiff_t II = 0; II < static_cast<std::ptrdiff_t>(d); ++II) {
      const std::size_t I = static_cast<std::size_t>(II);
      const std::size_t s = I / nn, m = I % nn;
      for (std::size_t J = I; J < d; ++J) {
        const std::size_t s2 = J / nn, k = J % nn;
        cplx v = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t r2 = 0; r2 < 2; ++r2) {
            const cplx c = t4[s][s2][r][r2];
            if (c != cplx(0.0)) v += c * rho_[(r * nn + m) * d + (r2 * nn + k)];
          }
        if (J == I) {
          out_[I * d + I] += cplx(v.real(), 0.0);
        } else {
          out_[I * d + J] += v;
          out_[J * d + I] += std::conj(v);
        }
      }
    }
  }

  for (std::size_t k = 0; k < dd; ++k) {
    dydt[k] = out_[k].real();
    dydt[dd + k] = out_[k].imag();
  }
}

}  // namespace

std::unique_ptr<CompiledRhs> compile_rhs(const model::ModelTier& tier, bool allow_rotating) {
  const ComplexMatrix& h = tier.hamiltonian;
  if (!h.square() || h.rows < 4 || h.rows % 2 != 0)
    throw contract_error("compile_rhs: malformed tier Hamiltonian");
  const std::size_t d = h.rows, nn = d / 2;
  if (tier.cutoff != 0 && 2 * tier.cutoff != d)
    throw contract_error("compile_rhs: tier cutoff disagrees with the Hamiltonian");

  auto fr = std::make_unique<FastRhs>();
  fr->dim = d;
  fr->n = nn;
  fr->nu = tier.params.nu;
  fr->structure = tier.jump_set.structure;
  fr->rotating = allow_rotating && tier.tag != model::TierTag::RwaDressed;

  ComplexMatrix heff = h;
  if (fr->structure == model::JumpStructure::AngularFamily) {
    const auto& ang = tier.jump_set.angular;
    if (ang.nodes.size() != tier.jump_set.jumps.size() || ang.rates.size() != ang.nodes.size())
      throw contract_error("compile_rhs: inconsistent angular family data");
    // K = sum_j rate_j D_j^dag D_j on the motional factor; the jump stores
    // sqrt(rate_j) D_j in its (g-row, e-col) block.
    ComplexMatrix kmot(nn, nn);
    for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
      ComplexMatrix dj(nn, nn);
      const double sr = std::sqrt(ang.rates[j]);
      for (std::size_t m = 0; m < nn; ++m)
        for (std::size_t k = 0; k < nn; ++k) dj(m, k) = tier.jump_set.jumps[j](m, nn + k) / sr;
      ComplexMatrix dd = numkit::matmul(dj.adjoint(), dj);
      dd *= cplx(ang.rates[j], 0.0);
      kmot += dd;
    }
    for (std::size_t m = 0; m < nn; ++m)
      for (std::size_t k = 0; k < nn; ++k) heff(nn + m, nn + k) -= cplx(0.0, 0.5) * kmot(m, k);

    // Shared eigenbasis of the position quadrature. The matrix is real symmetric
    // with simple spectrum, so each eigenvector is real up to one overall phase;
    // strip that phase before dropping to real storage.
    auto eig = numkit::hermitian_eig(model::position(model::FockSpace(nn)));
    double max_imag = 0.0;
    fr->q.resize(nn * nn);
    fr->qt.resize(nn * nn);
    for (std::size_t j = 0; j < nn; ++j) {
      std::size_t imax = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < nn; ++i) {
        const double a = std::abs(eig.eigenvectors(i, j));
        if (a > best) best = a, imax = i;
      }
      const cplx piv = eig.eigenvectors(imax, j);
      const cplx phase = piv / std::abs(piv);
      for (std::size_t i = 0; i < nn; ++i) {
        const cplx v = eig.eigenvectors(i, j) * std::conj(phase);
        max_imag = std::max(max_imag, std::abs(v.imag()));
        fr->q[i * nn + j] = v.real();
        fr->qt[j * nn + i] = v.real();
      }
    }
    if (max_imag > 1e-7)
      throw diagnostic_error("compile_rhs: position eigenbasis unexpectedly complex");
    fr->ghad.resize(nn * nn);
    for (std::size_t k = 0; k < nn; ++k)
      for (std::size_t l = 0; l < nn; ++l) {
        double acc = 0.0;
        const double dl = eig.eigenvalues[k] - eig.eigenvalues[l];
        for (std::size_t j = 0; j < ang.nodes.size(); ++j)
          acc += ang.rates[j] * std::cos(ang.eta * ang.nodes[j] * dl);
        fr->ghad[k * nn + l] = acc;
      }
  } else if (fr->structure == model::JumpStructure::InternalStatic) {
    const auto& ops = tier.jump_set.internal_ops;
    if (ops.empty() || ops.size() != tier.jump_set.jumps.size())
      throw contract_error("compile_rhs: inconsistent static internal data");
    ComplexMatrix b2(2, 2);
    for (const auto& A : ops) {
      if (A.rows != 2 || A.cols != 2) throw contract_error("compile_rhs: internal op not 2x2");
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          for (std::size_t r = 0; r < 2; ++r) {
            b2(s, s2) += std::conj(A(r, s)) * A(r, s2);
            for (std::size_t r2 = 0; r2 < 2; ++r2)
              fr->t4[s][s2][r][r2] += A(s, r) * std::conj(A(s2, r2));
          }
        }
    }
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t s2 = 0; s2 < 2; ++s2)
        for (std::size_t k = 0; k < nn; ++k)
          heff(s * nn + k, s2 * nn + k) -= cplx(0.0, 0.5) * b2(s, s2);
  } else {
    throw contract_error("compile_rhs: generic jump sets have no compiled form");
  }

  if (fr->rotating) {
    // The frame carries the free phonon rotation; drop it from the diagonal.
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t k = 0; k < nn; ++k)
        heff(s * nn + k, s * nn + k) -= tier.params.nu * static_cast<double>(k);
  }

  const double drop = 1e-14 * std::max(1.0, numkit::max_norm(heff));
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t r = 0; r < 2; ++r) {
      ComplexMatrix sub(nn, nn);
      for (std::size_t m = 0; m < nn; ++m)
        for (std::size_t k = 0; k < nn; ++k) sub(m, k) = heff(s * nn + m, r * nn + k);
      fr->blocks[s][r].build(sub, drop);
    }

  return fr;
}

void pack_state(const ComplexMatrix& rho, std::vector<double>& y) {
  if (!rho.square()) throw contract_error("pack_state: state must be square");
  const std::size_t d = rho.rows, dd = d * d;
  y.resize(2 * dd);
  for (std::size_t k = 0; k < dd; ++k) {
    y[k] = rho.a[k].real();
    y[dd + k] = rho.a[k].imag();
  }
}

void unpack_state(const std::vector<double>& y, std::size_t d, bool rotated, double nu, double t,
                  ComplexMatrix& rho) {
  const std::size_t dd = d * d;
  if (y.size() != 2 * dd) throw contract_error("unpack_state: planar size mismatch");
  rho = ComplexMatrix(d, d);
  for (std::size_t k = 0; k < dd; ++k) rho.a[k] = cplx(y[k], y[dd + k]);
  if (!rotated) return;
  const std::size_t nn = d / 2;
  std::vector<cplx> ph(nn);
  for (std::size_t m = 0; m < nn; ++m) ph[m] = std::polar(1.0, nu * t * static_cast<double>(m));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      rho(i, j) *= std::conj(ph[i % nn]) * ph[j % nn];
}

}  // namespace sscool::dynamics
