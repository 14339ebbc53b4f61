#include "fermsea/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fermsea {

namespace {

constexpr Real kClampSlack = 1e-9;

Real nats_term(Real p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

void check_base(Real base) {
  if (!(base > 1.0)) throw domain_error("log base must exceed 1");
}

}  // namespace

Real binary_entropy(Real x, Real base) {
  check_base(base);
  if (std::abs(x) > 1.0)
    throw domain_error("binary_entropy: |x| > 1 (x = " + std::to_string(x) + ")");
  const Real p = 0.5 * (1.0 + x);
  const Real q = 0.5 * (1.0 - x);
  return (nats_term(p) + nats_term(q)) / std::log(base);
}

Real binary_entropy_derivative(Real x, Real base) {
  check_base(base);
  if (std::abs(x) >= 1.0)
    throw domain_error("binary_entropy_derivative: |x| >= 1");
  return 0.5 * std::log((1.0 - x) / (1.0 + x)) / std::log(base);
}

Spectrum spectrum(const RegionMatrix& matrix) {
  const MatrixC& g = matrix.entries;
  VectorR ev;
  // Real symmetric fast path when the matrix has no imaginary part.
  Real imag_max = 0.0;
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i)
      imag_max = std::max(imag_max, std::abs(g(i, j).imag()));
  if (imag_max <= 1e-14) {
    Eigen::SelfAdjointEigenSolver<MatrixR> solver(g.real(),
                                                  Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw numeric_error("eigensolver failed to converge");
    ev = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw numeric_error("eigensolver failed to converge");
    ev = solver.eigenvalues();
  }
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > 1.0 + kClampSlack)
      throw numeric_error("region matrix eigenvalue " + std::to_string(ev[i]) +
                          " lies outside [-1, 1] beyond the clamping slack");
    ev[i] = std::clamp(ev[i], -1.0, 1.0);
  }
  return Spectrum{std::move(ev)};
}

TangentBound tangent_upper_bound(Real x0, Real base) {
  check_base(base);
  if (!(x0 > 0.0 && x0 < 1.0))
    throw domain_error("tangent_upper_bound: x0 must lie in (0, 1)");
  const Real a = std::log((1.0 + x0) / (1.0 - x0)) / (4.0 * x0 * std::log(base));
  const Real b = binary_entropy(x0, base) - a * (1.0 - x0 * x0);
  // Domination check: f(x) >= h(x) on [-1, 1].
  const int n = 10000;
  for (int i = 0; i <= n; ++i) {
    const Real x = -1.0 + 2.0 * i / n;
    const Real gap = a * (1.0 - x * x) + b - binary_entropy(x, base);
    if (gap < -1e-12)
      throw std::logic_error("tangent bound fails to dominate h at x = " +
                             std::to_string(x));
  }
  return TangentBound{a, b, x0, base};
}

Real x0_schedule(int L) {
  if (L < 2) throw domain_error("x0_schedule requires L >= 2");
  const Real x0 = 1.0 - std::log(static_cast<Real>(L)) / L;
  return std::clamp(x0, 0.0, 1.0 - 1e-12);
}

Real purity_lower_bound(const RegionMatrix& matrix) {
  const Index n = matrix.size();
  return static_cast<Real>(n) - matrix.entries.squaredNorm();
}

Real EntropyReport::purity_lower_in_base() const {
  return purity_lower * std::log(2.0) / std::log(base);
}

Real entropy_from_spectrum(const Spectrum& s, Real base) {
  Real sum = 0.0;
  for (Index i = 0; i < s.eigenvalues.size(); ++i)
    sum += binary_entropy(s.eigenvalues[i], base);
  return sum;
}

EntropyReport block_entropy(const RegionMatrix& matrix, Real base) {
  EntropyReport r;
  r.d = matrix.region.dimension();
  r.L = matrix.region.bounding_edge();
  r.n = matrix.size();
  r.cube = matrix.region.is_cube();
  r.base = base;
  const Spectrum s = spectrum(matrix);
  r.S = entropy_from_spectrum(s, base);
  r.purity_lower = purity_lower_bound(matrix);
  // The schedule needs L >= 2; single-site regions borrow the L = 2 tangent,
  // which is still a valid upper bound (any x0 in (0,1) dominates h).
  const TangentBound t = tangent_upper_bound(x0_schedule(std::max(r.L, 2)), base);
  r.a = t.a;
  r.b = t.b;
  r.x0 = t.x0;
  r.tangent_upper = t.a * r.purity_lower + t.b * static_cast<Real>(r.n);
  return r;
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string entropy_csv_header() {
  return "d,L,S,purity_lower,tangent_upper,a,b,x0,base";
}

std::string entropy_csv_row(const EntropyReport& r) {
  std::ostringstream ss;
  ss << r.d << ',' << (r.cube ? static_cast<Index>(r.L) : r.n) << ','
     << format_real(r.S) << ',' << format_real(r.purity_lower) << ','
     << format_real(r.tangent_upper) << ',' << format_real(r.a) << ','
     << format_real(r.b) << ',' << format_real(r.x0) << ','
     << format_real(r.base);
  return ss.str();
}

std::vector<EntropyReport> entropy_reports_from_csv(const std::string& text) {
  std::vector<EntropyReport> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("d,", 0) == 0) continue;  // column header
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    if (cols.size() != 9)
      throw config_error("sweep CSV row needs 9 columns, got " +
                         std::to_string(cols.size()));
    EntropyReport r;
    try {
      r.d = std::stoi(cols[0]);
      r.L = std::stoi(cols[1]);
      r.n = static_cast<Index>(std::stoll(cols[1]));
      r.S = std::stod(cols[2]);
      r.purity_lower = std::stod(cols[3]);
      r.tangent_upper = std::stod(cols[4]);
      r.a = std::stod(cols[5]);
      r.b = std::stod(cols[6]);
      r.x0 = std::stod(cols[7]);
      r.base = std::stod(cols[8]);
    } catch (const std::exception&) {
      throw config_error("cannot parse sweep CSV row: " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fermsea
