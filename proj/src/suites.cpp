#include "iclt/suites.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "iclt/clark.hpp"
#include "iclt/errors.hpp"
#include "iclt/rng.hpp"

namespace iclt {

namespace {

constexpr std::uint64_t kSequenceStream = 5;
constexpr std::uint64_t kAlphaStream = 6;

cplx random_coefficient(std::uint64_t seed, std::uint64_t index) {
  return {2.0 * rng::uniform(seed, kSequenceStream, 2 * index) - 1.0,
          2.0 * rng::uniform(seed, kSequenceStream, 2 * index + 1) - 1.0};
}

CoefficientSequence random_sequence(std::uint64_t seed, int length, int salt) {
  std::vector<cplx> v(length);
  const std::uint64_t base = static_cast<std::uint64_t>(salt) << 20;
  for (int n = 0; n < length; ++n) v[n] = random_coefficient(seed, base + n);
  return CoefficientSequence::explicit_values(std::move(v));
}

// Tuples of pairs (n_k, j_k) with max{n_k, j_k} < min{n_{k+1}, j_{k+1}}.
void pair_tuples(int n_max, int pairs, int floor, std::vector<std::pair<int, int>>& cur,
                 std::vector<std::vector<std::pair<int, int>>>& out) {
  if (static_cast<int>(cur.size()) == pairs) {
    out.push_back(cur);
    return;
  }
  for (int n = floor + 1; n <= n_max; ++n)
    for (int j = floor + 1; j <= n_max; ++j) {
      cur.push_back({n, j});
      pair_tuples(n_max, pairs, std::max(n, j), cur, out);
      cur.pop_back();
    }
}

CorrelationReport sandwich_report(const NormComparability& nc, double S2, double kap) {
  const double sigma2 = nc.l2.rhs.real();
  CorrelationReport r;
  r.name = "kappa_sandwich";
  r.lhs = sigma2;
  r.rhs = S2;
  r.residual = std::max({0.0, sigma2 - kap * S2, S2 / kap - sigma2});
  r.tolerance = 0.0;
  r.pass = nc.kappa_sandwich;
  r.note = "S²/κ ≤ σ² ≤ κS², κ = " + std::to_string(kap);
  return r;
}

void run_identities(WordIntegrator& I, const TestProduct& p, const IdentitySuiteOptions& o,
                    std::vector<SuiteRow>& rows) {
  const int n_max = o.n_max;
  auto add = [&](const char* family, CorrelationReport r) { rows.push_back({p.label, family, std::move(r)}); };

  for (int level = 1; level <= n_max; ++level)
    for (int m = -8; m <= 8; ++m) add("pushforward", pushforward_check(I, TrigPolynomial::monomial(m), level));

  for (int k = 1; k <= n_max; ++k)
    for (int j = k + 1; j <= n_max; ++j) add("covariance", covariance_check(I, k, j));

  for (int pairs = 2; pairs <= o.max_pairs; ++pairs) {
    std::vector<std::vector<std::pair<int, int>>> tuples;
    std::vector<std::pair<int, int>> cur;
    pair_tuples(n_max, pairs, 0, cur, tuples);
    for (const auto& t : tuples) add("factorization", factorization_check(I, t));
  }

  const CoefficientSequence sq_seq = random_sequence(o.seed, n_max, 0);
  auto squares = [&](std::vector<IndexRange> ranges) {
    add("uncorrelated_squares", uncorrelated_squares_check(I, sq_seq, ranges));
  };
  // Two ranges of length ≤ 3 anywhere, three ranges of length ≤ 2, and a tiling by four triples.
  for (int a = 1; a <= n_max; ++a)
    for (int b = a; b <= std::min(n_max, a + 2); ++b)
      for (int c = b + 1; c <= n_max; ++c)
        for (int d = c; d <= std::min(n_max, c + 2); ++d) squares({{a, b}, {c, d}});
  for (int a = 1; a <= n_max; a += 2)
    for (int c = a + 2; c <= n_max; c += 2)
      for (int e = c + 2; e <= n_max; e += 2)
        squares({{a, std::min(a + 1, c - 1)}, {c, std::min(c + 1, e - 1)}, {e, std::min(e + 1, n_max)}});
  if (n_max >= 12) squares({{1, 3}, {4, 6}, {7, 9}, {10, 12}});

  for (int n1 = 1; n1 <= n_max; ++n1)
    for (int n2 = 1; n2 <= n_max; ++n2)
      for (int n3 = std::max(n1, n2) + 1; n3 <= n_max; ++n3)
        for (int n4 = std::max(n1, n2) + 1; n4 <= n_max; ++n4)
          for (int e : {1, -1}) {
            const int n[4] = {n1, n2, n3, n4};
            const int s[1] = {e};
            add("four_cancellation", four_factor_check(I, FourFactorCase::Cancellation, n, s));
          }

  for (int n1 = 1; n1 <= n_max; ++n1)
    for (int n2 = n1 + 1; n2 <= n_max; ++n2)
      for (int n3 = n2 + 1; n3 <= n_max; ++n3)
        for (int n4 = n3 + 1; n4 <= n_max; ++n4)
          for (int e1 : {1, -1})
            for (int e3 : {1, -1}) {
              const int n[4] = {n1, n2, n3, n4};
              const int s[4] = {e1, -e1, e3, -e3};
              add("four_equality", four_factor_check(I, FourFactorCase::Equality, n, s));
            }

  const double kap = kappa(I.f().lambda());
  for (int s = 0; s < o.sequences; ++s)
    for (int N = 1; N <= n_max; ++N) {
      const CoefficientSequence seq = random_sequence(o.seed, N, 1 + s * 64 + N);
      const NormComparability nc = norm_comparability_check(I, seq, N);
      add("l2_norm", nc.l2);
      add("kappa_sandwich", sandwich_report(nc, energy(seq, N), kap));
      for (const auto& r : nc.scalar) add("scalar_product", r);
    }
}

}  // namespace

std::vector<TestProduct> default_test_products() {
  using std::numbers::pi;
  return {
      {"z^2", BlaschkeProduct::make(1.0, {0.0, 0.0})},
      {"z^2(0.6-z)/(1-0.6z)", BlaschkeProduct::make(1.0, {0.0, 0.0, 0.6})},
      {"zeros[0,0.21]", BlaschkeProduct::make(1.0, {0.0, 0.21})},
      {"zeros[0,0.3,0.7]", BlaschkeProduct::make(1.0, {0.0, 0.3, 0.7})},
      {"zeros[0,0.35i] phase 1", BlaschkeProduct::from_angle(1.0, {0.0, {0.0, 0.35}})},
      {"zeros[0,0.5i,0.7]", BlaschkeProduct::make(1.0, {0.0, {0.0, 0.5}, 0.7})},
      {"zeros[0,0.5]", BlaschkeProduct::make(1.0, {0.0, 0.5})},
      {"zeros[0,0.625e^{i pi/3},-0.8] phase 0.4",
       BlaschkeProduct::from_angle(0.4, {0.0, std::polar(0.625, pi / 3), -0.8})},
  };
}

std::vector<TestProduct> clark_test_products() {
  return {
      {"zeros[0,0.5]", BlaschkeProduct::make(1.0, {0.0, 0.5})},
      {"zeros[0,0.3+0.4i,-0.6]", BlaschkeProduct::make(1.0, {0.0, {0.3, 0.4}, -0.6})},
      {"zeros[0,0.5i,-0.4,0.7] phase 2", BlaschkeProduct::from_angle(2.0, {0.0, {0.0, 0.5}, -0.4, 0.7})},
      {"zeros[0,0.2,-0.5i,0.6+0.3i,-0.8] phase 0.7",
       BlaschkeProduct::from_angle(0.7, {0.0, 0.2, {0.0, -0.5}, {0.6, 0.3}, -0.8})},
  };
}

std::vector<SuiteRow> identity_suite(const TestProduct& product, const IdentitySuiteOptions& options,
                                     IdentitySuiteStats* stats) {
  if (options.n_max < 4 || options.n_max > 16) throw PreconditionError("identity suite needs 4 <= n_max <= 16");
  if (product.f.is_rotation()) throw PreconditionError("identity suite needs a non-rotation");
  WordIntegrator I(product.f, options.correlation);
  std::vector<SuiteRow> rows;
  // First pass only collects words so quadrature runs as one batch.
  I.set_recording(true);
  run_identities(I, product, options, rows);
  I.flush();
  I.set_recording(false);
  rows.clear();
  run_identities(I, product, options, rows);

  if (stats) {
    stats->words = I.evaluated().size();
    stats->quadrature_words = I.quadrature_count();
    stats->transfer_words = I.transfer_count();
    stats->largest_grid = I.largest_grid();
    stats->route_discrepancy = 0.0;
    if (I.quadrature_count() > 0 && options.correlation.method != IntegralMethod::Transfer) {
      TransferEngine engine(product.f);
      for (const auto& [w, v] : I.evaluated())
        if (depth(w) <= options.correlation.auto_quadrature_depth)
          stats->route_discrepancy = std::max(stats->route_discrepancy, std::abs(engine.integral(w) - v));
    }
  }
  return rows;
}

std::vector<SuiteRow> clark_suite(const TestProduct& product, const ClarkSuiteOptions& o) {
  if (o.alpha_count < 1) throw PreconditionError("alpha_count must be positive");
  const BlaschkeProduct& f = product.f;
  std::vector<SuiteRow> rows;
  auto add = [&](const char* family, CorrelationReport r) { rows.push_back({product.label, family, std::move(r)}); };

  for (int j = 0; j < o.alpha_count; ++j) {
    const cplx alpha = std::polar(1.0, rng::angle(o.seed, kAlphaStream, j));
    const ClarkMeasure mu = clark_measure(f, alpha);
    const std::string tag = "(alpha#" + std::to_string(j) + ")";
    add("weight_normalization", make_report("total_mass" + tag, mu.total_mass(), 1.0, 1e-10, false));
    double pull = 0.0;
    for (const ClarkAtom& atom : mu.atoms()) pull = std::max(pull, std::abs(f.eval(atom.z) - alpha));
    add("pullback", make_report("pullback" + tag, pull, 0.0, 1e-9, false));
    for (const MomentResidual& m : verify_moments(f, alpha, o.l_max, o.quad))
      add("moment", make_report("moment(l=" + std::to_string(m.l) + ")" + tag, m.lhs, m.rhs, 1e-8, false));
  }
  for (int m = -o.m_max; m <= o.m_max; ++m) {
    const TrigPolynomial g = TrigPolynomial::monomial(m);
    const double res = verify_disintegration(f, g, static_cast<std::size_t>(o.alpha_count), o.exec);
    add("disintegration", make_report("disintegration(m=" + std::to_string(m) + ")", res, 0.0, 1e-8, false,
                                      "lhs holds |alpha-average - exact mean|"));
  }
  return rows;
}

bool within_tolerance(const CorrelationReport& r, double rel_tol, double abs_tol) {
  if (!std::isfinite(r.residual)) return false;
  const double target = std::abs(r.rhs);
  if (target == 0.0) return r.residual < abs_tol;
  return r.residual < rel_tol * target;
}

}  // namespace iclt
