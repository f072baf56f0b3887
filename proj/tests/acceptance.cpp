// Acceptance suite: one section per criterion, each printing a PASS/FAIL
// line. The process exit code is the number of failed criteria.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sesq/report.hpp"
#include "support.hpp"

using namespace sesq;
using gen::Rng;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::cout << "CRITERION " << criterion << ": " << (pass ? "PASS" : "FAIL") << " - " << what
            << std::endl;
  if (!pass) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// --------------------------------------------------------------------------
// 1. Belian behaviour of the module category over the corpus.
// --------------------------------------------------------------------------
void criterion_1() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long instances = 0;
  try {
    for (const SesquiadPtr& base : gen::corpus()) {
      Rng rng(1001 + base->size());
      auto zoo = gen::module_zoo(base, rng);
      int done = 0;
      while (done < 200) {
        auto h = gen::random_hom(zoo, rng);
        if (!h) continue;
        ++done;
        ++instances;
        auto cls = classify(*h);
        // balanced: full + mono + epi forces iso
        if (is_full(*h) && cls.mono && cls.epi && !cls.iso) {
          pass = false;
          detail = "full mono epi but not iso";
        }
        // zero cokernel forces epi
        auto ck = cokernel(*h);
        bool coker_zero = ck.module->carrier.is_trivial() && ck.module->point_count() == 1;
        if (coker_zero && !cls.epi) {
          pass = false;
          detail = "zero cokernel but not epi";
        }
        // kernel universal property
        auto k = kernel(*h);
        if (!is_zero_hom(compose(*h, k.inclusion))) {
          pass = false;
          detail = "kernel composite nonzero";
        }
        if (auto g = gen::random_hom_into(h->src, zoo, rng)) {
          if (is_zero_hom(compose(*h, *g))) {
            // factor g through the kernel by point lookup
            std::vector<int> pm;
            bool ok = true;
            for (int i = 0; i < g->src->point_count() && ok; ++i) {
              Vec v = g->apply(g->src->points[size_t(i)]);
              int to = -1;
              for (int j = 0; j < k.module->point_count(); ++j)
                if (k.inclusion.apply(k.module->points[size_t(j)]) == v) to = j;
              if (to < 0) ok = false;
              else pm.push_back(to);
            }
            if (!ok) {
              pass = false;
              detail = "kernel factorization misses a point";
            } else {
              Hom u = make_hom(g->src, k.module, pm);
              if (!hom_equal(compose(k.inclusion, u), *g)) {
                pass = false;
                detail = "kernel factorization does not recover the map";
              }
            }
          }
        }
        // cokernel universal property
        if (auto g = gen::random_hom_from(h->dst, zoo, rng)) {
          if (is_zero_hom(compose(*g, *h))) {
            std::vector<int> pm(static_cast<size_t>(ck.module->point_count()), -1);
            for (int i = 0; i < h->dst->point_count(); ++i) {
              int from = ck.projection.point_map[size_t(i)];
              int to = g->point_map[size_t(i)];
              if (pm[size_t(from)] >= 0 && pm[size_t(from)] != to) {
                pass = false;
                detail = "cokernel factorization ill-defined";
              }
              pm[size_t(from)] = to;
            }
            Hom u = make_hom(ck.module, g->dst, pm);
            if (!hom_equal(compose(u, ck.projection), *g)) {
              pass = false;
              detail = "cokernel factorization does not recover the map";
            }
          }
        }
        // binary products: pairing recovers the legs
        if (done % 25 == 0) {
          const ModulePtr& a = rng.pick(zoo);
          const ModulePtr& b = rng.pick(zoo);
          auto pr = product_module(a, b);
          auto f = gen::random_hom_into(a, zoo, rng);
          if (f) {
            if (auto g2 = gen::random_hom_into(b, {f->src}, rng)) {
              Hom paired = pair_hom(*f, *g2, pr.module);
              if (!hom_equal(compose(pr.proj_left, paired), *f) ||
                  !hom_equal(compose(pr.proj_right, paired), *g2)) {
                pass = false;
                detail = "product pairing fails";
              }
            }
          }
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(1, pass,
         "belian axioms over the corpus, " + std::to_string(instances) + " hom instances (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 2. Mono/epi/iso characterization against a categorical probe oracle.
// --------------------------------------------------------------------------
bool oracle_iso(const Hom& h) {
  // brute-force search for a two-sided inverse among all homs
  for (const Hom& g : enumerate_homs(h.dst, h.src)) {
    if (!hom_equal(compose(g, h), identity_hom(h.src))) continue;
    if (hom_equal(compose(h, g), identity_hom(h.dst))) return true;
  }
  return false;
}

bool oracle_epi(const Hom& h, const std::vector<ModulePtr>& probes) {
  for (const ModulePtr& w : probes) {
    auto homs = enumerate_homs(h.dst, w);
    for (size_t i = 0; i < homs.size(); ++i)
      for (size_t j = i + 1; j < homs.size(); ++j)
        if (hom_equal(compose(homs[i], h), compose(homs[j], h))) return false;
  }
  return true;
}

bool oracle_mono(const Hom& h, const std::vector<ModulePtr>& probes) {
  for (const ModulePtr& w : probes) {
    auto homs = enumerate_homs(w, h.src);
    for (size_t i = 0; i < homs.size(); ++i)
      for (size_t j = i + 1; j < homs.size(); ++j)
        if (hom_equal(compose(h, homs[i]), compose(h, homs[j]))) return false;
  }
  return true;
}

void criterion_2() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long instances = 0, mono_divergences = 0;
  try {
    auto base = f1();
    // finite-carrier modules over F1 (carrier order <= 16) plus the free one
    FgModule zc(1, IntMatrix(1, 0), {IntMatrix::identity(1)});
    auto mk = [&](long n, std::vector<long> pts) {
      FgModule c(1, IntMatrix::from_rows({{n}}), {IntMatrix::identity(1)});
      std::vector<Vec> v;
      for (long p : pts) v.push_back(Vec{Int(p)});
      return make_module(base, c, v);
    };
    auto z = [&](std::vector<long> pts) {
      std::vector<Vec> v;
      for (long p : pts) v.push_back(Vec{Int(p)});
      return make_module(base, zc, v);
    };
    std::vector<ModulePtr> pool{
        z({0, 1}),       z({0, 1, 2}),       mk(2, {0, 1}),   mk(4, {0, 1}),
        mk(4, {0, 1, 2}), mk(4, {0, 1, 2, 3}), mk(8, {0, 1}),   mk(3, {0, 1}),
        mk(6, {0, 1, 3}), mk(2, {0, 1}),
    };
    std::vector<ModulePtr> probes{z({0, 1}), mk(2, {0, 1}), mk(4, {0, 1}),
                                  mk(4, {0, 1, 2, 3}), mk(8, {0, 1})};

    // the mono and epi without iso example: the unit object inside a module
    // with the same carrier and more points
    {
      auto s = z({0, 1});
      auto t = z({0, 1, 2});
      std::vector<int> pm;
      for (const Vec& p : s->points) pm.push_back(t->point_index(p));
      Hom h = make_hom(s, t, pm);
      auto cls = classify(h);
      if (!(cls.mono && cls.epi && !cls.iso)) {
        pass = false;
        detail = "designed mono+epi+noniso example misclassified";
      }
      if (oracle_iso(h) || !oracle_epi(h, probes) || !oracle_mono(h, probes)) {
        pass = false;
        detail = "oracle disagrees on the designed example";
      }
    }

    Rng rng(2024);
    while (instances < 60) {
      const ModulePtr& s = rng.pick(pool);
      const ModulePtr& t = rng.pick(pool);
      std::vector<int> pm(static_cast<size_t>(s->point_count()));
      for (int i = 0; i < s->point_count(); ++i) pm[size_t(i)] = rng.below(t->point_count());
      pm[size_t(s->zero_index())] = t->zero_index();
      Hom h;
      try {
        h = make_hom(s, t, pm);
      } catch (const Error&) {
        continue;
      }
      ++instances;
      auto cls = classify(h);
      if (cls.iso != oracle_iso(h)) {
        pass = false;
        detail = "iso disagrees with the inverse search";
      }
      if (cls.epi != oracle_epi(h, {pool[0], pool[1], cokernel(h).module})) {
        pass = false;
        detail = "epi disagrees with the probe oracle";
      }
      bool om = oracle_mono(h, probes);
      if (cls.mono && !om) {
        pass = false;
        detail = "carrier-injective hom is not categorically mono";
      }
      if (om && !cls.mono) ++mono_divergences;  // documented divergence
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  std::string note = mono_divergences
                         ? "; note: " + std::to_string(mono_divergences) +
                               " point-injective homs with non-injective carriers are "
                               "categorically monic but classified non-mono (documented)"
                         : "";
  report(2, pass,
         "classification vs categorical oracle on " + std::to_string(instances) +
             " instances (" + std::to_string(timer.ms()) + " ms)" +
             (pass ? note : ": " + detail));
}

// --------------------------------------------------------------------------
// 3. Strongness: the two computations agree; canonical maps are strong.
// --------------------------------------------------------------------------
void criterion_3() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long instances = 0;
  try {
    for (const SesquiadPtr& base : gen::corpus()) {
      Rng rng(3003 + base->size());
      auto zoo = gen::module_zoo(base, rng);
      int done = 0;
      while (done < 100) {
        auto h = gen::random_hom(zoo, rng);
        if (!h) continue;
        ++done;
        ++instances;
        is_strong(*h);  // throws InternalInconsistency when the routes differ
        if (done % 10 == 0) {
          const ModulePtr& m = rng.pick(zoo);
          auto sub = gen::random_stable_subset(m, rng);
          if (!is_strong(quotient_module(m, sub).projection).strong) {
            pass = false;
            detail = "quotient projection not strong";
          }
          if (!is_strong(kernel(*h).inclusion).strong) {
            pass = false;
            detail = "kernel inclusion not strong";
          }
          if (!is_strong(cokernel(*h).projection).strong) {
            pass = false;
            detail = "cokernel projection not strong";
          }
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(3, pass,
         "strongness double-check on " + std::to_string(instances) + " homs (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 4. The kernel of a quotient is the full closure, exhaustively.
// --------------------------------------------------------------------------
void criterion_4() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long checked = 0;
  try {
    for (const SesquiadPtr& base : gen::corpus()) {
      Rng rng(4004 + base->size());
      auto zoo = gen::module_zoo(base, rng, 6);
      for (const ModulePtr& m : zoo) {
        if (m->point_count() > 8) continue;
        // every subset of points: filter to submodules, then check the law
        int np = m->point_count();
        for (unsigned long mask = 0; mask < (1ul << np); ++mask) {
          if (!(mask >> m->zero_index() & 1)) continue;
          std::vector<int> sub;
          for (int i = 0; i < np; ++i)
            if (mask >> i & 1) sub.push_back(i);
          bool stable = true;
          for (int i : sub)
            for (int a = 1; a < base->size() && stable; ++a)
              if (!(mask >> m->point_index(m->act(a, m->points[size_t(i)])) & 1)) stable = false;
          if (!stable) continue;
          auto q = quotient_module(m, sub);  // asserts ker == closure
          std::vector<int> kp = kernel_points(q.projection);
          if (kp != full_closure_points(m, sub)) {
            pass = false;
            detail = "kernel differs from the closure";
          }
          ++checked;
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(4, pass,
         "kernel of quotient equals full closure on " + std::to_string(checked) +
             " exhaustive submodules (" + std::to_string(timer.ms()) + " ms)" +
             (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 5. Tensor functor: fullness, strongness, right exactness.
// --------------------------------------------------------------------------
void criterion_5() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long full_checks = 0, strong_checks = 0, right_exact_checks = 0;
  try {
    for (const SesquiadPtr& base : gen::corpus()) {
      Rng rng(5005 + base->size());
      auto zoo = gen::module_zoo(base, rng, 6, 4, 8);
      int done = 0;
      while (done < 40) {
        auto f = gen::random_hom(zoo, rng);
        auto g = gen::random_hom(zoo, rng);
        if (!f || !g) continue;
        if (f->src->carrier.rank() * g->src->carrier.rank() > 8) continue;
        if (f->dst->carrier.rank() * g->dst->carrier.rank() > 8) continue;
        ++done;
        if (is_full(*f) && is_full(*g)) {
          ++full_checks;
          if (!is_full(tensor_hom(*f, *g))) {
            pass = false;
            detail = "tensor of full morphisms is not full";
          }
        }
        if (is_strong(*f).strong) {
          ++strong_checks;
          const ModulePtr& m = rng.pick(zoo);
          if (m->carrier.rank() * std::max(f->src->carrier.rank(), f->dst->carrier.rank()) <= 8) {
            Hom one_f = tensor_hom(identity_hom(m), *f);
            if (!is_strong(one_f).strong) {
              pass = false;
              detail = "identity tensor strong morphism is not strong";
            }
          }
        }
      }
      // right exactness on short strong exact sequences
      for (int t = 0; t < 10; ++t) {
        auto se = gen::random_short_exact(zoo, rng);
        const ModulePtr& fmod = rng.pick(zoo);
        if (fmod->carrier.rank() * se.t->carrier.rank() > 8) continue;
        ++right_exact_checks;
        auto fs = tensor_module(fmod, se.s);
        auto ft = tensor_module(fmod, se.t);
        auto fu = tensor_module(fmod, se.u);
        Hom a = tensor_hom(identity_hom(fmod), se.incl, fs, ft);
        Hom b = tensor_hom(identity_hom(fmod), se.proj, ft, fu);
        auto zz = zero_module(base);
        Sequence seq{{a, b, zero_hom(fu, zz)}};
        if (!is_strong_exact(seq)) {
          pass = false;
          detail = "tensored short exact sequence is not right strong exact";
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(5, pass,
         "tensor preservation: " + std::to_string(full_checks) + " fullness, " +
             std::to_string(strong_checks) + " strongness, " +
             std::to_string(right_exact_checks) + " right-exactness checks (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 6. Exactness transfer between the sequence and its carriers.
// --------------------------------------------------------------------------
bool carrier_exact(const Hom& f, const Hom& g) {
  // ker(ext g) == im(ext f) as lattices over the middle carrier
  Lattice ker = preimage_lattice(g.ext, g.dst->carrier.relations());
  Lattice im = Lattice::from_columns(f.dst->carrier.rank(),
                                     hstack(f.ext, f.dst->carrier.relations().basis()));
  return im.contains(ker) && ker.contains(im);
}

void criterion_6() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long constructed = 0, hypothesis_fail_conclusion_fail = 0;
  try {
    for (const SesquiadPtr& base : gen::corpus()) {
      Rng rng(6006 + base->size());
      auto zoo = gen::module_zoo(base, rng, 6, 4, 8);
      int done = 0;
      while (done < 20) {
        // composable pair with zero composite: f followed by the quotient of
        // a stable superset of its image points
        auto f = gen::random_hom(zoo, rng);
        if (!f) continue;
        std::set<int> im(f->point_map.begin(), f->point_map.end());
        std::vector<int> sub = gen::random_stable_subset(f->dst, rng);
        std::set<int> sel(sub.begin(), sub.end());
        for (int i : im) sel.insert(i);
        auto q = quotient_module(f->dst, {sel.begin(), sel.end()});
        Hom g = q.projection;
        ++done;
        ++constructed;
        Sequence seq{{*f, g}};
        bool f_strong = is_strong(*f).strong;
        bool g_strong = is_strong(g).strong;
        bool exact = is_exact_at(seq, 0);
        bool cexact = carrier_exact(*f, g);
        if (f_strong && exact && !cexact) {
          pass = false;
          detail = "strong + exact but carriers not exact";
        }
        if (g_strong && cexact && !exact) {
          pass = false;
          detail = "strong + carrier exact but sequence not exact";
        }
        if ((!f_strong && exact && !cexact) || (!g_strong && cexact && !exact))
          ++hypothesis_fail_conclusion_fail;
      }
    }
    // designed counterexample: forgetting the addition of Z/2 is exact at the
    // sequence level but the carriers are not exact
    {
      auto base = f1();
      FgModule c2(1, IntMatrix::from_rows({{2}}), {IntMatrix::identity(1)});
      auto t = make_module(base, c2, {Vec{Int(0)}, Vec{Int(1)}});
      auto tt = trivial_addition_module(*t);
      Hom f = make_hom(tt, t, {0, 1});
      auto z = zero_module(base);
      Sequence seq{{zero_hom(z, tt), f}};
      bool exact = is_exact_at(seq, 0);
      bool cexact = carrier_exact(seq.maps[0], f);
      bool f0_strong = is_strong(seq.maps[0]).strong;
      // the zero map into tt is strong; exactness at tt holds, yet the next
      // map has non-injective carrier, so the carrier sequence cannot be
      // exact; the failing hypothesis is the strongness of f itself
      if (!(exact && !cexact && f0_strong && !is_strong(f).strong)) {
        pass = false;
        detail = "designed transfer counterexample behaves unexpectedly";
      } else {
        ++hypothesis_fail_conclusion_fail;
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(6, pass,
         "exactness transfer on " + std::to_string(constructed) +
             " sequences, hypothesis-failure witnesses: " +
             std::to_string(hypothesis_fail_conclusion_fail) + " (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 7. Flatness against torsion-freeness and the ideal criterion.
// --------------------------------------------------------------------------
void criterion_7() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long checked = 0;
  try {
    auto base = f1();
    // every abelian group of order <= 64 plus a free part, exhaustively by
    // invariant factor chains d1 | d2 | ...
    std::vector<std::vector<long>> chains{{}};
    for (long d1 = 2; d1 <= 64; ++d1) {
      chains.push_back({d1});
      for (long d2 = d1; d1 * d2 <= 64; ++d2) {
        if (d2 % d1) continue;
        chains.push_back({d1, d2});
        for (long d3 = d2; d1 * d2 * d3 <= 64; ++d3)
          if (d3 % d2 == 0) chains.push_back({d1, d2, d3});
      }
    }
    for (const auto& chain : chains) {
      for (int free = 0; free <= 1; ++free) {
        int rank = int(chain.size()) + free;
        if (rank == 0) continue;
        IntMatrix rel(rank, int(chain.size()));
        for (int j = 0; j < int(chain.size()); ++j) rel.at(j, j) = chain[size_t(j)];
        FgModule carrier(rank, rel, std::vector<IntMatrix>{IntMatrix::identity(rank)});
        // points: all elements when finite, else basis points and sums
        std::vector<Vec> pts{zero_vec(rank)};
        if (carrier.is_finite())
          pts = carrier.elements(Int(64));
        else
          for (int j = 0; j < rank; ++j) pts.push_back(unit_vec(rank, j));
        auto m = make_module(base, carrier, pts, false);
        auto rep = is_flat(m);
        bool expect = chain.empty();
        if ((rep.verdict == Flatness::flat) != expect) {
          pass = false;
          detail = "flatness disagrees with torsion-freeness";
        }
        // criterion (b) on the principal ideals that can detect the torsion
        for (long n : {2L, 3L, 5L}) {
          Subgroup ideal = ideal_generated(base->ring, {Vec{Int(n)}});
          bool inj = ideal_tensor_injective(m, ideal);
          bool has_n_torsion = false;
          for (const Int& t : carrier.torsion())
            if (divides(Int(n), t) || gcd(Int(n), t) != 1) has_n_torsion = true;
          if (inj == has_n_torsion) {
            pass = false;
            detail = "principal ideal criterion disagrees with torsion";
          }
        }
        ++checked;
      }
    }
    // the pinned witness over Z/4
    auto z4 = zmod(4);
    std::vector<IntMatrix> action;
    for (int i = 0; i < z4->ring.rank(); ++i) {
      IntMatrix mm(1, 1);
      mm.at(0, 0) = i + 1;
      action.push_back(mm);
    }
    auto f = make_module(z4, FgModule(1, IntMatrix::from_rows({{2}}), action),
                         {Vec{Int(0)}, Vec{Int(1)}});
    auto rep = is_flat(f);
    Subgroup w(z4->ring.underlying_module(),
               IntMatrix::from_cols(z4->ring.rank(), rep.witness_ideal));
    if (rep.verdict != Flatness::not_flat || !w.member(z4->embed(2)) || w.member(z4->embed(1))) {
      pass = false;
      detail = "Z/2 over Z/4 must fail at the ideal (2)";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(7, pass,
         "flatness on " + std::to_string(checked) + " exhaustive carriers plus the pinned Z/4 "
         "witness (" + std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 8. Spectra, simplicity, maximality, residue isomorphisms.
// --------------------------------------------------------------------------
void criterion_8() {
  Timer timer;
  bool pass = true;
  std::string detail;
  try {
    auto s = spec_c(f1());
    if (s.points.size() != 1 || !s.points[0].is_diagonal()) {
      pass = false;
      detail = "spec of F1 must be one diagonal point";
    }
    std::vector<SesquiadPtr> all = gen::corpus();
    all.push_back(gen::f4());
    all.push_back(gen::dual_f2());
    for (const SesquiadPtr& a : all) {
      // three routes to simplicity must agree
      bool lattice_simple = is_simple(a);
      bool units_simple = is_simple_via_units(a);
      bool pairwise = !a->is_zero_sesquiad();
      for (int x = 0; x < a->size() && pairwise; ++x)
        for (int y = x + 1; y < a->size() && pairwise; ++y)
          if (congruence_generated(a, {{x, y}}).num_classes != 1) pairwise = false;
      if (lattice_simple != units_simple || lattice_simple != pairwise) {
        pass = false;
        detail = "simplicity routes disagree on " + a->names[size_t(a->one)];
      }
      for (const Congruence& c : all_congruences(a)) {
        if (c.zero_one_separated() && is_maximal(c) && !is_prime(c)) {
          pass = false;
          detail = "maximal congruence is not prime";
        }
        // is_maximal itself cross-checks lattice maximality vs quotient
        // simplicity and throws on disagreement
        if (c.zero_one_separated()) is_maximal(c);
      }
      for (const Congruence& e : spec_c(a).points)
        if (!residue_isomorphism_verified(a, e)) {
          pass = false;
          detail = "residue isomorphism fails";
        }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(8, pass,
         std::string("spectra, simplicity, maximality and residue isomorphisms (") +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 9. Root bound for polynomials over simple sesquiads.
// --------------------------------------------------------------------------
void criterion_9() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long polys = 0;
  try {
    std::vector<SesquiadPtr> simples;
    for (const SesquiadPtr& a : gen::corpus())
      if (is_simple(a)) simples.push_back(a);
    simples.push_back(gen::f4());
    for (const SesquiadPtr& a : simples) {
      int n = a->size();
      for (int deg = 1; deg <= 3; ++deg) {
        std::vector<int> c(static_cast<size_t>(deg) + 1, 0);
        c[size_t(deg)] = 1;
        for (;;) {
          Polynomial p{c};
          ++polys;
          if (int(poly_roots(p, a).size()) > deg) {
            pass = false;
            detail = "polynomial with more roots than its degree";
          }
          int pos = 0;
          while (pos <= deg) {
            int lo = pos == deg ? 1 : 0;
            if (++c[size_t(pos)] < n) break;
            c[size_t(pos)] = lo;
            ++pos;
          }
          if (pos > deg) break;
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(9, pass,
         "root bound on " + std::to_string(polys) + " polynomials over simple sesquiads (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 10. Sheaf fullness: openwise equals stalkwise on every small poset.
// --------------------------------------------------------------------------
void criterion_10() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long instances = 0, full_count = 0;
  try {
    Rng rng(101010);
    auto base = f1();
    auto zoo = gen::module_zoo(base, rng, 5, 3, 6);
    std::vector<SchemePtr> schemes;
    for (int n = 1; n <= 4; ++n) {
      auto posets = gen::all_posets(n);
      // keep every small poset, sample the four-point ones
      for (size_t i = 0; i < posets.size(); ++i)
        if (n <= 3 || i % 9 == 0) schemes.push_back(gen::constant_scheme(posets[i]));
    }
    // designed non-full instances: the unit points inside a module with the
    // same carrier and an extra point, as a constant sheaf morphism
    FgModule zc(1, IntMatrix(1, 0), {IntMatrix::identity(1)});
    auto small = make_module(base, zc, {Vec{Int(0)}, Vec{Int(1)}});
    auto wide = make_module(base, zc, {Vec{Int(0)}, Vec{Int(1)}, Vec{Int(2)}});
    std::vector<int> incl_map;
    for (const Vec& p : small->points) incl_map.push_back(wide->point_index(p));
    Hom incl = make_hom(small, wide, incl_map);
    for (const SchemePtr& sc : schemes) {
      auto f = constant_sheaf(sc, small);
      auto g = constant_sheaf(sc, wide);
      std::vector<Hom> comps(static_cast<size_t>(sc->space.size()), incl);
      auto phi = make_sheaf_hom(f, g, comps);
      ++instances;
      auto rep = is_full_sheaf(phi);
      if (rep.full) {
        pass = false;
        detail = "designed non-full morphism reported full";
      }
    }
    size_t si = 0;
    while (instances < 210) {
      const SchemePtr& sc = schemes[si++ % schemes.size()];
      auto phi = gen::random_sheaf_hom(sc, zoo, rng);
      if (!phi) continue;
      ++instances;
      auto rep = is_full_sheaf(*phi);  // asserts the two routes agree
      if (rep.full) ++full_count;
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(10, pass,
         "sheaf fullness two ways on " + std::to_string(instances) + " homs (" +
             std::to_string(full_count) + " full) over all posets with up to 4 points (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 11. Cohomology: pinned values, oracle agreement, vanishing, base change.
// --------------------------------------------------------------------------
void criterion_11() {
  Timer timer;
  bool pass = true;
  std::string detail;
  long oracle_checked = 0, base_change_instances = 0;
  try {
    auto base = f1();
    FgModule zc(1, IntMatrix(1, 0), {IntMatrix::identity(1)});
    auto zfree = make_module(base, zc, {Vec{Int(0)}, Vec{Int(1)}});

    // one-point space: everything above degree zero vanishes
    {
      auto sc = gen::constant_scheme({{true}});
      auto rep = cohomology(constant_sheaf(sc, zfree));
      if (!(rep.dimension == 0 && rep.vanishing_checked)) {
        pass = false;
        detail = "one-point vanishing";
      }
      if (rep.oracle_checked) ++oracle_checked;
    }
    // Sierpinski space: nothing above degree zero
    {
      auto posets = gen::all_posets(2);
      for (const auto& le : posets) {
        auto sc = gen::constant_scheme(le);
        auto rep = cohomology(constant_sheaf(sc, zfree));
        for (const auto& d : rep.degrees)
          if (d.degree >= 1 && !d.group.is_trivial()) {
            pass = false;
            detail = "two-point space with higher cohomology";
          }
        if (rep.oracle_checked) ++oracle_checked;
      }
    }
    // the pseudocircle with constant Z: H0 = Z, H1 = Z, nothing above
    {
      std::vector<std::vector<bool>> le(4, std::vector<bool>(4, false));
      for (int i = 0; i < 4; ++i) le[size_t(i)][size_t(i)] = true;
      le[0][2] = le[0][3] = le[1][2] = le[1][3] = true;
      auto sc = gen::constant_scheme(le);
      auto rep = cohomology(constant_sheaf(sc, zfree));
      bool h0 = rep.degrees[0].group.free_rank() == 1 && rep.degrees[0].group.torsion().empty();
      bool h1 = rep.degrees[1].group.free_rank() == 1 && rep.degrees[1].group.torsion().empty();
      if (!(h0 && h1 && rep.dimension == 1 && rep.vanishing_checked)) {
        pass = false;
        detail = "pseudocircle cohomology differs from Z, Z";
      }
      if (rep.oracle_checked) ++oracle_checked;
    }
    // structure sheaves of affine spectra: non-constant stalks, higher
    // rank global sections rings
    for (const SesquiadPtr& a : {f1(), gen::idem(), zmod(4), gen::pm_one_f5()}) {
      auto sc = spec_scheme(a);
      if (sc->space.size() == 0) continue;
      auto sh = module_sheaf_from(sc, unit_module(sc->global));
      ++base_change_instances;
      auto bc = base_change_compare(sh);
      if (!bc.all_injective) {
        pass = false;
        detail = "base change fails on an affine structure sheaf";
      }
      ++oracle_checked;
    }
    // random sheaves over random posets: oracle agreement and vanishing run
    // inside cohomology(); base change must inject degreewise
    Rng rng(111111);
    auto zoo = gen::module_zoo(base, rng, 5, 3, 6);
    std::vector<SchemePtr> schemes;
    for (int n = 1; n <= 4; ++n) {
      auto posets = gen::all_posets(n);
      for (size_t i = 0; i < posets.size(); ++i)
        if (n <= 2 || i % 17 == 0) schemes.push_back(gen::constant_scheme(posets[i]));
    }
    size_t si = 0;
    while (base_change_instances < 100) {
      const SchemePtr& sc = schemes[si++ % schemes.size()];
      auto sh = gen::random_sheaf(sc, zoo, rng);
      ++base_change_instances;
      auto bc = base_change_compare(sh);
      if (!bc.all_injective) {
        pass = false;
        detail = "base change comparison not injective";
      }
      ++oracle_checked;
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(11, pass,
         "cohomology pinned values, " + std::to_string(oracle_checked) +
             " oracle-checked runs, base change injective on " +
             std::to_string(base_change_instances) + " instances (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

// --------------------------------------------------------------------------
// 12. Determinism of the report pipeline over the example corpus.
// --------------------------------------------------------------------------
void criterion_12() {
  Timer timer;
  bool pass = true;
  std::string detail;
  int files = 0;
  try {
    namespace fs = std::filesystem;
    std::vector<fs::path> paths;
    for (const char* dir : {"data", "../data", "../../data"})
      if (fs::exists(dir)) {
        for (const auto& entry : fs::directory_iterator(dir))
          if (entry.path().extension() == ".ses") paths.push_back(entry.path());
        break;
      }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
      pass = false;
      detail = "no example corpus found";
    }
    for (const auto& p : paths) {
      std::ifstream in(p);
      std::ostringstream os;
      os << in.rdbuf();
      DefinitionFile f = parse_definition_text(os.str());
      // round trip of the model
      if (!(parse_definition_text(serialize(f)) == f)) {
        pass = false;
        detail = "serialization round trip fails for " + p.filename().string();
      }
      Resolved defs = resolve(f);
      RunOptions opt;
      Json a = run_definition(defs, opt, "", nullptr, nullptr);
      Json b = run_definition(defs, opt, "", nullptr, nullptr);
      if (a.dump(2) != b.dump(2)) {
        pass = false;
        detail = "two runs differ for " + p.filename().string();
      }
      ++files;
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(12, pass,
         "byte-identical reports on " + std::to_string(files) + " corpus files (" +
             std::to_string(timer.ms()) + " ms)" + (pass ? "" : ": " + detail));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << std::endl;
  return failures;
}
