#include "modspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <array>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "modspec/diagonalize.hpp"
#include "modspec/harper.hpp"
#include "modspec/parallel.hpp"
#include "modspec/weak_diag.hpp"

namespace modspec {

namespace {

const std::vector<AlgebraShape>& standard_shapes() {
  static const std::vector<AlgebraShape> shapes{AlgebraShape({1}), AlgebraShape({2}),
                                                AlgebraShape({3}), AlgebraShape({2, 3})};
  return shapes;
}

std::vector<std::uint64_t> instance_seeds(std::uint64_t seed, std::uint64_t salt,
                                          std::size_t count) {
  SplitMix64 rng(seed ^ (salt * 0xD1B54A32D192ED03ULL));
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng.next());
  return out;
}

// Runs fn(i, rng) for every instance on the thread pool; results keep index order.
template <typename R, typename F>
std::vector<R> run_instances(std::uint64_t seed, std::uint64_t salt, std::size_t count, F fn) {
  const auto seeds = instance_seeds(seed, salt, count);
  std::vector<R> out(count);
  parallel_for(count, [&](std::size_t i) {
    SplitMix64 rng(seeds[i]);
    out[i] = fn(i, rng);
  });
  return out;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string fixed10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10f", v);
  return buf;
}

template <typename F>
CriterionResult timed(int id, std::string name, F body) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r{id, std::move(name), false, "", 0.0};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

ModuleOperator symmetrized(const ModuleOperator& k) { return (k + k.adjoint()).scaled(0.5); }

}  // namespace

std::string format_result(const CriterionResult& r) {
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name +
         ": " + r.detail;
}

CriterionResult verify_module_invariants(std::uint64_t seed) {
  return timed(0, "module invariants", [&](CriterionResult& r) {
    double trace_norm = 0.0;
    for (const auto& s : standard_shapes()) {
      const auto one = AlgebraElement::identity(s);
      trace_norm = std::max(trace_norm, std::abs(scalar_trace(one) - 1.0));
      for (const auto& v : center_trace(one).values) trace_norm = std::max(trace_norm, std::abs(v - 1.0));
    }

    struct Sample {
      double spectral = 0, subproj = 0, axioms = 0, schwarz = -1;
      bool positive = true;
    };
    const auto samples = run_instances<Sample>(seed, 0, 800, [](std::size_t i, SplitMix64& rng) {
      Sample s;
      const auto& shape = standard_shapes()[i % 4];
      const auto h = random_hermitian_element(rng, shape);
      s.spectral = operator_norm(spectral_decomposition(h).reconstruct() - h);

      const auto p = random_projection(rng, shape);
      const auto q = random_projection(rng, shape);
      const auto w = equivalent_subprojections(p, q);
      const auto rp = projection_ranks(w.r_p), rq = projection_ranks(w.r_q);
      const auto pp = projection_ranks(p), qq = projection_ranks(q);
      for (std::size_t j = 0; j < rp.size(); ++j)
        if (rp[j] != std::min(pp[j], qq[j]) || rq[j] != rp[j]) s.subproj = 1.0;
      s.subproj = std::max({s.subproj, operator_norm(p * w.r_p - w.r_p),
                            operator_norm(q * w.r_q - w.r_q),
                            operator_norm(w.v.adjoint() * w.v - w.r_p),
                            operator_norm(w.v * w.v.adjoint() - w.r_q)});

      const int n = std::array<int, 3>{1, 2, 4}[i % 3];
      const auto x = random_module_vector(rng, shape, n);
      const auto y = random_module_vector(rng, shape, n);
      const auto a = random_element(rng, shape);
      const auto xy = inner_product(x, y);
      s.axioms = std::max({operator_norm(xy.adjoint() - inner_product(y, x)),
                           operator_norm(inner_product(x, y.times(a)) - xy * a)});
      s.positive = validate_element(inner_product(x, x), ElementKind::Positive, 1e-12).ok;
      s.schwarz = operator_norm(xy) - module_norm(x) * module_norm(y);
      return s;
    });
    double spectral = 0, subproj = 0, axioms = 0, schwarz = -1;
    bool positive = true;
    for (const auto& s : samples) {
      spectral = std::max(spectral, s.spectral);
      subproj = std::max(subproj, s.subproj);
      axioms = std::max(axioms, s.axioms);
      schwarz = std::max(schwarz, s.schwarz);
      positive = positive && s.positive;
    }
    r.passed = trace_norm <= 1e-14 && spectral <= 1e-9 && subproj <= 1e-9 && axioms <= 1e-12 &&
               positive && schwarz <= 1e-12;
    r.detail = "trace normalization " + sci(trace_norm) + ", spectral reconstruction " +
               sci(spectral) + ", subprojection witness " + sci(subproj) + ", inner-product axioms " +
               sci(axioms) + ", Cauchy-Schwarz excess " + sci(schwarz) +
               (positive ? ", <x,x> positive" : ", <x,x> NOT positive");
  });
}

CriterionResult verify_diagonalization(std::uint64_t seed) {
  return timed(1, "diagonalization", [&](CriterionResult& r) {
    struct Sample {
      double orth, residual, margin, recon;
    };
    const auto samples = run_instances<Sample>(seed, 1, 200, [](std::size_t i, SplitMix64& rng) {
      const auto& shape = standard_shapes()[i % 4];
      const int n = 2 + static_cast<int>((i / 4) % 3);
      const auto k = random_positive_operator(rng, shape, n);
      const auto d = diagonalize(k);
      const double scale = 1.0 + operator_norm(k);
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& block : d.ordering_margins)
        for (double m : block) margin = std::min(margin, m);
      return Sample{orthonormality_defect(d.eigenvectors), d.residual / scale, margin,
                    operator_norm(k - reconstruct(d)) / scale};
    });
    double orth = 0, residual = 0, recon = 0, margin = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      orth = std::max(orth, s.orth);
      residual = std::max(residual, s.residual);
      recon = std::max(recon, s.recon);
      margin = std::min(margin, s.margin);
    }
    r.passed = orth <= 1e-9 && residual <= 1e-8 && margin >= -1e-9 && recon <= 1e-8;
    r.detail = "200 instances; orthonormality " + sci(orth) + ", residual/(1+||K||) " +
               sci(residual) + ", min margin " + sci(margin) + ", reconstruction/(1+||K||) " +
               sci(recon);
  });
}

CriterionResult verify_uniqueness(std::uint64_t seed) {
  return timed(2, "uniqueness up to unitary equivalence", [&](CriterionResult& r) {
    const auto diffs = run_instances<double>(seed, 2, 50, [](std::size_t i, SplitMix64& rng) {
      const auto& shape = standard_shapes()[i % 4];
      const int n = 2 + static_cast<int>((i / 4) % 3);
      const auto k = random_positive_operator(rng, shape, n);
      const auto w = random_module_unitary(rng, shape, n);
      const auto d1 = diagonalize(k);
      const auto d2 = diagonalize(symmetrized(w * k * w.adjoint()));
      double diff = 0.0;
      for (int ii = 0; ii < n; ++ii)
        for (int j = 0; j < shape.factor_count(); ++j) {
          const auto s1 = block_eigenvalues(d1.eigenvalues[static_cast<std::size_t>(ii)], j);
          const auto s2 = block_eigenvalues(d2.eigenvalues[static_cast<std::size_t>(ii)], j);
          for (std::size_t c = 0; c < s1.size(); ++c) diff = std::max(diff, std::abs(s1[c] - s2[c]));
        }
      return diff;
    });
    const double worst = max_of(diffs);
    r.passed = worst <= 1e-9;
    r.detail = "50 instances; max per-block spectrum difference " + sci(worst);
  });
}

CriterionResult verify_perturbation(std::uint64_t seed) {
  return timed(3, "perturbation matching", [&](CriterionResult& r) {
    struct Sample {
      double pair_excess, conj_excess, vec_defect;
    };
    const auto samples = run_instances<Sample>(seed, 3, 100, [](std::size_t i, SplitMix64& rng) {
      const double delta = std::array<double, 3>{1e-1, 1e-2, 1e-3}[i % 3];
      const auto& shape = standard_shapes()[(i / 3) % 4];
      const int n = 2 + static_cast<int>(i % 2);
      const auto k1 = random_positive_operator(rng, shape, n);
      const auto h = random_hermitian_operator(rng, shape, n);
      const auto k2 = symmetrized(k1 + h.scaled(delta / operator_norm(h)));
      const auto report = match_eigenvalues(k1, k2);
      return Sample{report.max_pair_bound - delta, report.conjugation_defect - delta,
                    report.eigenvector_defect};
    });
    double pair = -1, conj = -1, vec = 0;
    for (const auto& s : samples) {
      pair = std::max(pair, s.pair_excess);
      conj = std::max(conj, s.conj_excess);
      vec = std::max(vec, s.vec_defect);
    }
    r.passed = pair <= 1e-8 && conj <= 1e-8 && vec <= 1e-8;
    r.detail = "100 pairs, delta in {1e-1,1e-2,1e-3}; max(||l1-l2|| - delta) " + sci(pair) +
               ", max(||U*K1U-K2|| - delta) " + sci(conj) + ", eigenvector map defect " + sci(vec);
  });
}

CriterionResult verify_minimax(std::uint64_t seed) {
  return timed(4, "continuous minimax", [&](CriterionResult& r) {
    // Configurations with total dimension <= 12.
    struct Config {
      AlgebraShape shape;
      int n;
    };
    static const std::vector<Config> configs{
        {AlgebraShape({1}), 2},         {AlgebraShape({1}), 4},
        {AlgebraShape({2}), 2},         {AlgebraShape({2}), 3},
        {AlgebraShape({3}), 2},         {AlgebraShape({3}), 4},
        {AlgebraShape({2, 3}), 2},      {AlgebraShape({1, 1}, {0.25, 0.75}), 5},
        {AlgebraShape({1, 2}, {0.5, 0.5}), 3}, {AlgebraShape({2}), 6}};
    const auto oracle_err = run_instances<double>(seed, 4, 50, [](std::size_t i, SplitMix64& rng) {
      const auto& c = configs[i % configs.size()];
      ModuleOperator k = random_hermitian_operator(rng, c.shape, c.n);
      // Every other instance is snapped to a coarse grid to force ties.
      if (i % 2 == 1) k = finite_spectrum_approx(random_positive_operator(rng, c.shape, c.n), 1.0).op;
      const auto scale = spectral_scale(k);
      const MinimaxProfile oracle(k);
      double err = 0.0;
      for (int t = 1; t <= 20; ++t) {
        const double alpha = c.n * t / 20.0;
        err = std::max(err, std::abs(oracle.query(alpha) - scale.evaluate(alpha)));
      }
      return err;
    });
    const auto lipschitz = run_instances<double>(seed, 40, 100, [](std::size_t i, SplitMix64& rng) {
      const auto& shape = standard_shapes()[i % 4];
      const int n = 2 + static_cast<int>((i / 4) % 3);
      const auto k1 = random_hermitian_operator(rng, shape, n);
      const auto h = random_hermitian_operator(rng, shape, n);
      const double delta = std::pow(10.0, rng.uniform(-3.0, 0.0));
      const auto k2 = symmetrized(k1 + h.scaled(delta / operator_norm(h)));
      const auto s1 = spectral_scale(k1), s2 = spectral_scale(k2);
      double sup = 0.0;
      for (int t = 1; t <= 1000; ++t) {
        const double alpha = n * t / 1000.0;
        sup = std::max(sup, std::abs(s1.evaluate(alpha) - s2.evaluate(alpha)));
      }
      return sup - operator_norm(k1 - k2);
    });
    const double oracle_worst = max_of(oracle_err);
    const double lip_worst = max_of(lipschitz);
    r.passed = oracle_worst <= 1e-9 && lip_worst <= 1e-10;
    r.detail = "50 instances x 20 alphas, |oracle - scale| " + sci(oracle_worst) +
               "; 100 pairs, max(sup|e1-e2| - ||K1-K2||) " + sci(lip_worst);
  });
}

CriterionResult verify_exchange_ordering(std::uint64_t seed) {
  return timed(5, "exchange ordering", [&](CriterionResult& r) {
    struct Sample {
      bool matches_oracle, multiset_exact, exchanges_ok;
      double unitarity, conjugation;
    };
    const auto samples = run_instances<Sample>(seed, 5, 200, [](std::size_t i, SplitMix64& rng) {
      const auto& shape = standard_shapes()[i % 4];
      const int n = 2 + static_cast<int>((i / 4) % 3);
      const auto lams = random_spectral_family(rng, shape, n, 3);
      const auto fam = order_all(lams);
      const auto oracle = sorted_chunks(lams);
      Sample s{true, true, fam.exchanges <= n * (n - 1) / 2, 0.0, 0.0};
      for (int j = 0; j < shape.factor_count(); ++j) {
        std::vector<double> before, after;
        for (int ii = 0; ii < n; ++ii) {
          const auto got = block_multiset(fam.lambdas[static_cast<std::size_t>(ii)], j);
          if (got != oracle[static_cast<std::size_t>(j)][static_cast<std::size_t>(ii)])
            s.matches_oracle = false;
          after.insert(after.end(), got.begin(), got.end());
          const auto orig = block_multiset(lams[static_cast<std::size_t>(ii)], j);
          before.insert(before.end(), orig.begin(), orig.end());
        }
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        if (before != after) s.multiset_exact = false;
      }
      const auto one = ModuleOperator::identity(shape, n);
      s.unitarity = operator_norm(fam.witness.adjoint() * fam.witness - one);
      std::vector<AlgebraElement> in, out;
      for (const auto& l : lams) in.push_back(l.reconstruct());
      for (const auto& l : fam.lambdas) out.push_back(l.reconstruct());
      s.conjugation = operator_norm(fam.witness.adjoint() * ModuleOperator::diagonal(in) *
                                        fam.witness -
                                    ModuleOperator::diagonal(out));
      return s;
    });
    bool oracle = true, exact = true, exchanges = true;
    double unitarity = 0, conjugation = 0;
    for (const auto& s : samples) {
      oracle = oracle && s.matches_oracle;
      exact = exact && s.multiset_exact;
      exchanges = exchanges && s.exchanges_ok;
      unitarity = std::max(unitarity, s.unitarity);
      conjugation = std::max(conjugation, s.conjugation);
    }
    r.passed = oracle && exact && exchanges && unitarity <= 1e-9 && conjugation <= 1e-9;
    r.detail = std::string("200 instances; sort-then-chunk oracle ") +
               (oracle ? "matched" : "MISMATCH") + ", multisets " + (exact ? "exact" : "CHANGED") +
               ", exchange count " + (exchanges ? "within n(n-1)/2" : "EXCEEDED") +
               ", witness unitarity " + sci(unitarity) + ", conjugation " + sci(conjugation);
  });
}

CriterionResult verify_weak_diagonalization(std::uint64_t seed) {
  return timed(6, "weak diagonalization iteration", [&](CriterionResult& r) {
    constexpr int kIterations = 20;
    struct Sample {
      double step_excess, residual, limit_gap;
    };
    const auto samples = run_instances<Sample>(seed, 6, 50, [](std::size_t i, SplitMix64& rng) {
      const auto& shape = standard_shapes()[i % 4];
      const int n = 2 + static_cast<int>((i / 4) % 2);
      const auto k = random_positive_operator(rng, shape, n);
      const auto trace = iterate_weak_diagonalization(k, kIterations);
      Sample s{-1.0, trace.final_residual, 0.0};
      for (std::size_t step = 1; step < trace.steps.size(); ++step) {
        const int nn = static_cast<int>(step) + 1;
        s.step_excess = std::max(s.step_excess, trace.steps[step].step_distance - std::ldexp(1.0, 1 - nn));
      }
      const auto direct = diagonalize(k);
      for (int ii = 0; ii < n; ++ii)
        for (int j = 0; j < shape.factor_count(); ++j) {
          const auto a = block_eigenvalues(trace.limits[static_cast<std::size_t>(ii)], j);
          const auto b = block_eigenvalues(direct.eigenvalues[static_cast<std::size_t>(ii)], j);
          for (std::size_t c = 0; c < a.size(); ++c) s.limit_gap = std::max(s.limit_gap, std::abs(a[c] - b[c]));
        }
      return s;
    });
    double step = -1, residual = 0, gap = 0;
    for (const auto& s : samples) {
      step = std::max(step, s.step_excess);
      residual = std::max(residual, s.residual);
      gap = std::max(gap, s.limit_gap);
    }
    const double residual_bound = std::ldexp(1.0, -18) + 1e-7;
    const double gap_bound = std::ldexp(1.0, -19) + 1e-8;
    r.passed = step <= 1e-9 && residual <= residual_bound && gap <= gap_bound;
    r.detail = "50 instances, N=20; max(step - 2^(1-n)) " + sci(step) + ", final residual " +
               sci(residual) + " (bound " + sci(residual_bound) + "), limit spectrum gap " +
               sci(gap) + " (bound " + sci(gap_bound) + ")";
  });
}

CriterionResult verify_harper(std::uint64_t /*seed*/) {
  return timed(7, "Harper bands", [&](CriterionResult& r) {
    constexpr int kGrid = 64;
    const auto field2 = harper_field(1, 2, kGrid);
    const auto bands2 = band_functions(field2);
    double closed_form = 0.0;
    for (std::size_t pt = 0; pt < field2.point_count(); ++pt) {
      const double c2 = std::cos(field2.k2(pt));
      const double c1 = std::cos(field2.k1(pt) / 2.0);
      const double e = 2.0 * std::sqrt(c2 * c2 + c1 * c1);
      closed_form = std::max({closed_form, std::abs(bands2.value(pt, 0) - e),
                              std::abs(bands2.value(pt, 1) + e)});
    }
    const double top = bands2.value(0, 0);
    const double top_err = std::abs(top - 2.0 * std::numbers::sqrt2);

    // Gap locus of the q = 2 bands: k1 = pi, k2 in {pi/2, 3pi/2}.
    std::set<std::size_t> expected;
    for (double k2 : {std::numbers::pi / 2.0, 3.0 * std::numbers::pi / 2.0}) {
      const auto i1 = static_cast<std::size_t>(std::lround(std::numbers::pi / (2.0 * std::numbers::pi) * kGrid)) % kGrid;
      const auto i2 = static_cast<std::size_t>(std::lround(k2 / (2.0 * std::numbers::pi) * kGrid)) % kGrid;
      expected.insert(i1 * kGrid + i2);
    }
    std::set<std::size_t> found;
    for (const auto& d : bands2.degeneracies) found.insert(d.point);
    const bool locus_ok = found == expected;

    bool bounded = true, symmetric = true, continuous = true;
    std::string sym_detail;
    for (int q : {2, 3, 5}) {
      const auto field = harper_field(1, q, kGrid);
      const auto bands = band_functions(field);
      const auto rep = selection_report(field, bands);
      bounded = bounded && rep.spectrum_min >= -4.0 && rep.spectrum_max <= 4.0;
      const double defect = std::max(rep.symmetry_defect, rep.min_max_defect);
      symmetric = symmetric && defect <= 2.0 * rep.modulus;
      continuous = continuous && rep.continuity_ok && rep.weyl_slack <= 1e-9;
      sym_detail += " q=" + std::to_string(q) + ":" + sci(defect) + "/" + sci(2.0 * rep.modulus);
    }
    r.passed = closed_form <= 1e-9 && top_err <= 1e-8 && locus_ok && bounded && symmetric && continuous;
    r.detail = "q=2 closed form " + sci(closed_form) + ", top band at 0 " + fixed10(top) + ", gap points " +
               std::to_string(found.size()) + (locus_ok ? " (on locus)" : " (OFF LOCUS)") +
               (bounded ? ", spectra in [-4,4]" : ", SPECTRUM OUT OF RANGE") +
               (continuous ? ", Weyl/continuity ok" : ", CONTINUITY FAILED") +
               ", symmetry defect/2*modulus" + sym_detail;
  });
}

std::vector<CriterionResult> run_verification(std::uint64_t seed) {
  return {verify_module_invariants(seed),  verify_diagonalization(seed),
          verify_uniqueness(seed),         verify_perturbation(seed),
          verify_minimax(seed),            verify_exchange_ordering(seed),
          verify_weak_diagonalization(seed), verify_harper(seed)};
}

}  // namespace modspec
