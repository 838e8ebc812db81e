#include "twirlab/symmetry/compact.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "twirlab/core/hermitian_basis.hpp"
#include "twirlab/error.hpp"

namespace twirlab {

namespace {

using quantum::CMatrix;
using quantum::Complex;

// Removes the global phase: first entry of non-negligible size made real positive.
CMatrix canonical_phase(const CMatrix& u) {
  for (Index k = 0; k < u.size(); ++k) {
    const Complex z = u.data()[k];
    if (std::abs(z) > 1e-6) return u * (std::abs(z) / z);
  }
  return u;
}

bool same(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff() < 1e-9; }

Matrix snap(Matrix m) {
  for (Index k = 0; k < m.size(); ++k) {
    const double r = std::round(m.data()[k]);
    if (std::abs(m.data()[k] - r) <= 1e-12) m.data()[k] = r;
  }
  return m;
}

}  // namespace

std::shared_ptr<const GroupAction> su2_clifford_action() {
  static const std::shared_ptr<const GroupAction> action = [] {
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix h(2, 2);
    h << r, r, r, -r;
    CMatrix s(2, 2);
    s << 1, 0, 0, Complex(0, 1);
    const std::pair<const char*, CMatrix> gens[2] = {{"H", h}, {"S", s}};

    std::vector<std::pair<std::string, CMatrix>> found{{"e", CMatrix::Identity(2, 2)}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (const auto& [name, g] : gens) {
        const CMatrix next = canonical_phase(found[cur].second * g);
        bool known = false;
        for (const auto& f : found) known = known || same(f.second, next);
        if (known) continue;
        found.emplace_back(found[cur].first == "e" ? std::string(name) : found[cur].first + name, next);
        queue.push_back(found.size() - 1);
      }
    }

    const quantum::OperatorCoordinates coords({2});
    std::vector<std::pair<std::string, LinearMap>> maps;
    for (const auto& [label, u] : found) maps.emplace_back(label, LinearMap(snap(coords.superoperator(u))));
    DesignCertificate cert{"SU(2)", "single-qubit Clifford average (unitary 3-design)", 3, 3};
    return std::make_shared<const GroupAction>(build_finite_action(std::move(maps), 1e-9, cert));
  }();
  return action;
}

std::shared_ptr<const GroupAction> su2_collective_action(int n) {
  if (n < 1 || n > 3)
    fail(ErrorCode::UnsupportedSize, "SU(2) twirl is realized for 1 to 3 spinors, got " + std::to_string(n));
  if (n == 1) return su2_clifford_action();
  std::vector<std::shared_ptr<const GroupAction>> parts(static_cast<std::size_t>(n), su2_clifford_action());
  return std::make_shared<const GroupAction>(collective_action(std::move(parts)));
}

TwirlProjector su2_collective_twirl(int n) { return twirl_projector(su2_collective_action(n)); }

std::shared_ptr<const GroupAction> u1_phase_action(int cutoff, int m) {
  if (cutoff < 1) fail(ErrorCode::BadParam, "U(1) phase action: cutoff must be at least 1");
  if (m < cutoff + 1)
    fail(ErrorCode::BadParam, "U(1) phase action: cyclic order must exceed the cutoff");
  const quantum::OperatorCoordinates coords({cutoff + 1});
  std::vector<std::pair<std::string, LinearMap>> maps;
  for (int k = 0; k < m; ++k) {
    CMatrix u = CMatrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
      const double phase = 2.0 * std::numbers::pi * k * n / m;
      u(n, n) = Complex(std::cos(phase), std::sin(phase));
    }
    maps.emplace_back("z" + std::to_string(k), LinearMap(snap(coords.superoperator(u))));
  }
  DesignCertificate cert{"U(1)", "cyclic phase average Z_" + std::to_string(m), m - 1,
                         (m - 1) / cutoff};
  return std::make_shared<const GroupAction>(build_finite_action(std::move(maps), 1e-9, cert));
}

}  // namespace twirlab
