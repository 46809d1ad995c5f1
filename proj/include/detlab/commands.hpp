#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "detlab/discriminant.hpp"
#include "detlab/instance_io.hpp"
#include "detlab/lattice.hpp"
#include "detlab/oracle.hpp"
#include "detlab/parallel.hpp"
#include "detlab/polymatroid.hpp"
#include "detlab/rng.hpp"
#include "detlab/stratification.hpp"

namespace detlab {

// Outcome of one command run. The body is a pure function of the instance,
// the arguments, and the seed; wall clock and host facts never enter it, so
// identical invocations render byte-identical reports.
struct RunReport {
    std::string command;
    std::string name;    // instance display name, may be empty
    std::string digest;  // canonical-form digest of the instance
    bool seeded = false;  // true when the command consumed randomness
    std::uint64_t seed = 0;
    std::uint64_t prime = 0;  // 0 when no modular arithmetic ran
    bool ok = true;           // false when a mathematical expectation failed
    std::vector<std::string> failures;
    std::vector<std::string> checked_expectations;
    Json results;
};

inline void stamp_instance(RunReport& rep, const InstanceDoc& doc) {
    rep.name = doc.name;
    rep.digest = instance_digest(doc);
}

// Expectations are keyed by result field. Keys the current report does not
// produce belong to other commands and are skipped; the report lists which
// ones were actually compared.
inline void apply_expectations(RunReport& rep, const Json& expect) {
    if (expect.is_null()) return;
    if (!expect.is_object()) throw InputError("expected-results metadata must be an object");
    for (const auto& [key, want] : expect.items()) {
        if (!rep.results.contains(key)) continue;
        rep.checked_expectations.push_back(key);
        const Json& got = rep.results[key];
        if (got != want) {
            rep.ok = false;
            rep.failures.push_back("expected " + key + " = " + want.dump() + ", got " +
                                   got.dump());
        }
    }
}

inline Json flat_row_json(const Flat& f) {
    Json row;
    row["flat"] = mask_str(f.mask);
    row["rank"] = f.rank;
    row["defect"] = f.defect;
    return row;
}

inline Json verdict_json(const IrreducibilityReport& r) {
    Json j;
    j["confidence"] = FieldOf<Rat>::str(r.confidence);
    j["sections_tested"] = r.sections_tested;
    j["factor_counts"] = r.factor_counts;
    return j;
}

namespace detail {

template <class K>
void analyze_tuple(RunReport& rep, const SubspaceTuple<K>& t, ExecMode mode) {
    const int m = t.size();
    rep.results["ambient"] = t.ambient;
    rep.results["size"] = m;
    Json dims = Json::array();
    for (int i = 0; i < m; ++i) dims.push_back(t.dim(i));
    rep.results["dims"] = dims;

    if (m <= 10) {
        auto table = rank_table(t, mode);
        Json subsets = Json::array();
        for (Mask s = 0; s < (Mask(1) << m); ++s) {
            Json row;
            row["subset"] = mask_str(s);
            row["rank"] = table[s];
            row["defect"] = table[s] - std::popcount(s);
            subsets.push_back(std::move(row));
        }
        rep.results["subsets"] = std::move(subsets);
    } else {
        rep.results["subsets_omitted"] = true;
    }

    PredicateResult irr = is_irreducible(t, mode);
    rep.results["irreducible"] = irr.ok;
    if (!irr.ok) rep.results["irreducible_witness"] = mask_str(*irr.witness);
    PredicateResult bk = is_bk(t, mode);
    rep.results["bk"] = bk.ok;
    if (!bk.ok) rep.results["bk_witness"] = mask_str(*bk.witness);

    FlatLattice lat = flats_lattice(t, mode);
    rep.results["flats"] = static_cast<int>(lat.flats.size());
    Json flat_list = Json::array();
    for (const Flat& f : lat.flats) flat_list.push_back(flat_row_json(f));
    rep.results["flat_list"] = std::move(flat_list);

    DualEqualityReport dual = verify_dual_equality(t, mode);
    rep.results["dual_checked"] = dual.checked;
    rep.results["dual_violations"] = static_cast<int>(dual.violations.size());
    if (!dual.violations.empty()) {
        Json masks = Json::array();
        for (Mask v : dual.violations) masks.push_back(mask_str(v));
        rep.results["dual_violation_masks"] = std::move(masks);
        rep.ok = false;
        rep.failures.push_back("dual rank equality failed on " +
                               std::to_string(dual.violations.size()) + " subsets");
    }
}

}  // namespace detail

// Rank and defect survey: every subset, the two predicates, the lattice of
// flats, and the dual rank equality sweep. Lattice instances are analyzed
// through the spans of their point sets.
inline RunReport cmd_analyze(const InstanceDoc& doc, ExecMode mode = default_exec_mode()) {
    RunReport rep;
    rep.command = "analyze";
    stamp_instance(rep, doc);
    if (doc.kind == InstanceDoc::Kind::lattice) {
        rep.results["input"] = "lattice-tuple";
        rep.results["field"] = "rationals";
        rep.results["lattice_spans"] = true;
        detail::analyze_tuple(rep, spans(doc.lattice), mode);
    } else if (doc.prime_field) {
        rep.results["input"] = "subspace-tuple";
        rep.results["field"] = "prime " + std::to_string(doc.field_p);
        rep.prime = doc.field_p;
        detail::analyze_tuple(rep, to_fp_tuple(doc), mode);
    } else {
        rep.results["input"] = "subspace-tuple";
        rep.results["field"] = "rationals";
        detail::analyze_tuple(rep, to_rat_tuple(doc), mode);
    }
    apply_expectations(rep, doc.expect);
    return rep;
}

namespace detail {

// The prime a modular verification runs over: prime-field instances fix it
// themselves, rational ones reduce modulo the requested or default prime.
inline std::uint64_t working_prime(const InstanceDoc& doc, std::uint64_t requested,
                                   std::uint64_t fallback) {
    if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field) {
        if (requested != 0 && requested != doc.field_p)
            throw InputError("instance is already over F_" + std::to_string(doc.field_p) +
                             "; it cannot be reduced modulo " + std::to_string(requested));
        return doc.field_p;
    }
    const std::uint64_t p = requested != 0 ? requested : fallback;
    if (!is_prime_u64(p)) throw InputError("modulus " + std::to_string(p) + " is not prime");
    return p;
}

inline SubspaceTuple<Fp> fp_tuple_of(const InstanceDoc& doc, std::uint64_t p) {
    if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field) return to_fp_tuple(doc);
    return tuple_mod_p(rat_tuple_of(doc), p);
}

inline void verify_lemma2(RunReport& rep, const InstanceDoc& doc, ExecMode mode) {
    DualEqualityReport dual;
    if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field) {
        rep.prime = doc.field_p;
        dual = verify_dual_equality(to_fp_tuple(doc), mode);
    } else {
        dual = verify_dual_equality(rat_tuple_of(doc), mode);
    }
    rep.results["checked"] = dual.checked;
    rep.results["violations"] = static_cast<int>(dual.violations.size());
    if (!dual.violations.empty()) {
        Json masks = Json::array();
        for (Mask v : dual.violations) masks.push_back(mask_str(v));
        rep.results["violation_masks"] = std::move(masks);
        rep.ok = false;
        rep.failures.push_back("dual rank equality failed on " +
                               std::to_string(dual.violations.size()) + " subsets");
    }
}

inline void verify_lemma3(RunReport& rep, const InstanceDoc& doc, std::uint64_t p,
                          long long trials, std::uint64_t seed) {
    SubspaceTuple<Fp> t = fp_tuple_of(doc, p);
    DualRealization<Fp> d = dual_realization(t);
    std::map<Mask, long long> histogram;
    long long violations = 0;
    Json bad = Json::array();
    for (long long tr = 0; tr < trials; ++tr) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(tr)));
        std::vector<Fp> x;
        for (int i = 0; i < t.ambient; ++i)
            x.push_back(Fp::from_int(static_cast<std::int64_t>(rng.fp_elem(p)), p));
        try {
            Flat f = classify_point(d, x);
            ++histogram[f.mask];
        } catch (const CheckFailure& e) {
            ++violations;
            if (bad.size() < 16) {
                Json row;
                row["trial"] = tr;
                row["error"] = e.what();
                bad.push_back(std::move(row));
            }
        }
    }
    rep.results["p"] = p;
    rep.results["trials"] = trials;
    rep.results["violations"] = violations;
    Json hist = Json::array();
    for (const auto& [mask, hits] : histogram) {
        Json row;
        row["flat"] = mask_str(mask);
        row["hits"] = hits;
        hist.push_back(std::move(row));
    }
    rep.results["histogram"] = std::move(hist);
    if (violations > 0) {
        rep.results["violation_samples"] = std::move(bad);
        rep.ok = false;
        rep.failures.push_back(std::to_string(violations) +
                               " dual points failed to classify to a flat");
    }
}

inline void verify_prop4(RunReport& rep, const InstanceDoc& doc, std::uint64_t p,
                         long long trials, std::uint64_t seed, ExecMode mode) {
    SubspaceTuple<Fp> t = fp_tuple_of(doc, p);
    FlatLattice lat = flats_lattice(t, mode);
    DualRealization<Fp> d = dual_realization(t);
    Json rows = Json::array();
    int missed = 0;
    for (std::size_t i = 0; i < lat.flats.size(); ++i) {
        const Flat& f = lat.flats[i];
        StratumSample s = sample_stratum(d, f, p, trials, derive_seed(seed, i), mode);
        Json row;
        row["flat"] = mask_str(f.mask);
        row["trials"] = s.trials;
        row["hits"] = s.hits;
        row["hit_rate"] = s.hit_rate;
        if (!s.diagnostic.empty()) row["diagnostic"] = s.diagnostic;
        rows.push_back(std::move(row));
        if (s.hits == 0) ++missed;
    }
    rep.results["p"] = p;
    rep.results["flats"] = static_cast<int>(lat.flats.size());
    rep.results["strata"] = std::move(rows);
    rep.results["missed_flats"] = missed;
    if (missed > 0) {
        rep.ok = false;
        rep.failures.push_back(std::to_string(missed) +
                               " strata produced no sample point; the partition piece may be "
                               "empty or the trial budget too small");
    }
}

inline void verify_lemma5(RunReport& rep, const InstanceDoc& doc, std::uint64_t p,
                          long long trials, std::uint64_t seed, ExecMode mode) {
    SubspaceTuple<Fp> t = fp_tuple_of(doc, p);
    FlatLattice lat = flats_lattice(t, mode);
    DualRealization<Fp> d = dual_realization(t);
    Json rows = Json::array();
    for (std::size_t i = 0; i < lat.flats.size(); ++i) {
        const Flat& f = lat.flats[i];
        StratumSample s = sample_stratum(d, f, p, trials, derive_seed(seed, i), mode);
        Json row;
        row["flat"] = mask_str(f.mask);
        row["expected"] = t.dim_sum() - t.size() + std::popcount(f.mask);
        const std::vector<Fp>* witness = nullptr;
        for (const auto& x : s.points) {
            bool zero = true;
            for (const auto& c : x) zero = zero && FieldOf<Fp>::is_zero(c);
            if (!zero) {
                witness = &x;
                break;
            }
        }
        if (witness) {
            row["fiber_dim"] = fiber_dimension(t, *witness);
        } else {
            row["note"] = "stratum yielded no nonzero functional";
        }
        rows.push_back(std::move(row));
    }
    rep.results["p"] = p;
    rep.results["fibers"] = std::move(rows);
    rep.results["identity"] = "fiber_dim = dim_total - size + |flat|";
}

template <class K>
void verify_prop6(RunReport& rep, const SubspaceTuple<K>& t, ExecMode mode) {
    StratumTable table = stratum_dimensions(t, mode);
    rep.results["ambient"] = table.ambient;
    rep.results["size"] = table.size;
    rep.results["dim_total"] = table.dim_total;
    Json rows = Json::array();
    for (const StratumRow& r : table.rows) {
        Json row;
        row["flat"] = mask_str(r.flat);
        row["rank"] = r.rank;
        row["defect"] = r.defect;
        row["dim_bf"] = r.dim_bf;
        row["fiber_rank"] = r.fiber_rank;
        row["dim_qf"] = r.dim_qf;
        rows.push_back(std::move(row));
    }
    rep.results["strata"] = std::move(rows);
    rep.results["identity"] = "dim_qf = dim_total - defect + (ambient - size)";
    rep.results["mismatches"] = 0;  // stratum_dimensions throws on any row mismatch
}

inline void verify_prop1(RunReport& rep, const InstanceDoc& doc, long long trials,
                         std::uint64_t seed, ExecMode mode) {
    if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field)
        throw InputError("the random span experiment runs over the rationals");
    SubspaceTuple<Rat> t = rat_tuple_of(doc);
    std::vector<int> dims;
    for (int i = 0; i < t.size(); ++i) dims.push_back(t.dim(i));
    const int bound = 9;
    TupleExperiment exp = random_tuple_experiment(dims, t.ambient, static_cast<int>(trials),
                                                  bound, seed, mode);
    rep.results["dims"] = dims;
    rep.results["ambient"] = t.ambient;
    rep.results["trials"] = exp.trials;
    rep.results["bound"] = bound;
    rep.results["irreducible_count"] = exp.irreducible;
    rep.results["fraction"] = FieldOf<Rat>::str(exp.fraction());
    rep.results["threshold"] = "99/100";
    Json fails = Json::array();
    for (const auto& [trial, witness] : exp.failures) {
        Json row;
        row["trial"] = trial;
        row["witness"] = mask_str(witness);
        fails.push_back(std::move(row));
    }
    rep.results["failures_list"] = std::move(fails);
    if (exp.fraction() < Rat(99, 100)) {
        rep.ok = false;
        rep.failures.push_back("irreducible fraction " + FieldOf<Rat>::str(exp.fraction()) +
                               " fell below 99/100");
    }
}

}  // namespace detail

// Statement checks against one instance. Targets: lemma2 (dual rank
// equality), lemma3 (every dual point classifies to a flat), prop4 (every
// stratum is non-empty), lemma5 (sampled fiber dimensions), prop6 (stratum
// dimension table), prop1 (random span experiment at the instance's format).
inline RunReport cmd_verify(const InstanceDoc& doc, const std::string& which,
                            std::uint64_t prime, long long trials, std::uint64_t seed,
                            ExecMode mode = default_exec_mode()) {
    RunReport rep;
    rep.command = "verify " + which;
    stamp_instance(rep, doc);
    if (which == "lemma2") {
        detail::verify_lemma2(rep, doc, mode);
    } else if (which == "lemma3") {
        const std::uint64_t p = detail::working_prime(doc, prime, 10007);
        rep.prime = p;
        rep.seeded = true;
        rep.seed = seed;
        detail::verify_lemma3(rep, doc, p, trials > 0 ? trials : 10000, seed);
    } else if (which == "prop4") {
        const std::uint64_t p = detail::working_prime(doc, prime, 10007);
        rep.prime = p;
        rep.seeded = true;
        rep.seed = seed;
        detail::verify_prop4(rep, doc, p, trials > 0 ? trials : 200, seed, mode);
    } else if (which == "lemma5") {
        const std::uint64_t p = detail::working_prime(doc, prime, 10007);
        rep.prime = p;
        rep.seeded = true;
        rep.seed = seed;
        detail::verify_lemma5(rep, doc, p, trials > 0 ? trials : 50, seed, mode);
    } else if (which == "prop6") {
        if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field) {
            rep.prime = doc.field_p;
            detail::verify_prop6(rep, to_fp_tuple(doc), mode);
        } else {
            detail::verify_prop6(rep, rat_tuple_of(doc), mode);
        }
    } else if (which == "prop1") {
        rep.seeded = true;
        rep.seed = seed;
        detail::verify_prop1(rep, doc, trials > 0 ? trials : 1000, seed, mode);
    } else {
        throw InputError("unknown verification target \"" + which +
                         "\"; expected lemma2, lemma3, prop4, lemma5, prop6, or prop1");
    }
    apply_expectations(rep, doc.expect);
    return rep;
}

// Irreducibility checks: "a" asks the oracle about the restricted determinant
// of a square subspace tuple, "b" about the unit-normalized discriminantal
// polynomial of a lattice tuple. The verdict is reported as computed; the
// exit status only turns on expected-results metadata.
inline RunReport cmd_theorem(const InstanceDoc& doc, const std::string& which, int sections,
                             std::uint64_t seed) {
    RunReport rep;
    rep.command = "theorem " + which;
    stamp_instance(rep, doc);
    rep.seeded = true;
    rep.seed = seed;
    const int sec = sections > 0 ? sections : 11;
    if (which == "a") {
        if (doc.kind == InstanceDoc::Kind::subspace && doc.prime_field)
            throw InputError("the determinant check runs over the rationals");
        IrreducibilityReport r = theorem_a_check(rat_tuple_of(doc), sec, seed);
        rep.prime = r.prime;
        rep.results["theorem_a"] = verdict_str(r.verdict);
        rep.results["oracle"] = verdict_json(r);
    } else if (which == "b") {
        if (doc.kind != InstanceDoc::Kind::lattice)
            throw InputError("the discriminantal check needs a lattice-tuple instance");
        IrreducibilityReport r = theorem_b_check(doc.lattice, sec, seed);
        rep.prime = r.prime;
        rep.results["theorem_b"] = verdict_str(r.verdict);
        rep.results["oracle"] = verdict_json(r);
    } else {
        throw InputError("unknown theorem \"" + which + "\"; expected a or b");
    }
    apply_expectations(rep, doc.expect);
    return rep;
}

// Discriminantal pipeline actions on a lattice instance: build (assemble the
// instance and print the polynomials), classify (linear-interpolation-rigid
// or not), codim (sampled codimension and fiber dimension of the incidence
// projection), eliminate (exact univariate discriminant for one set in rank
// one).
inline RunReport cmd_discriminant(const InstanceDoc& doc, const std::string& action,
                                  std::uint64_t prime, int trials, std::uint64_t seed,
                                  ExecMode mode = default_exec_mode()) {
    if (doc.kind != InstanceDoc::Kind::lattice)
        throw InputError("discriminant actions need a lattice-tuple instance");
    RunReport rep;
    rep.command = "discriminant " + action;
    stamp_instance(rep, doc);
    if (action == "build") {
        DiscriminantInstance inst = build_instance(doc.lattice);
        Json names = Json::array();
        for (const auto& n : inst.ring->names) names.push_back(n);
        rep.results["variables"] = std::move(names);
        rep.results["coefficients"] = inst.coeff_count();
        rep.results["g"] = inst.g.str();
        rep.results["g_pi"] = inst.g_pi.str();
        rep.results["g_equals_g_pi"] = inst.g == inst.g_pi;
        Json sections = Json::array();
        for (const auto& f : inst.f) sections.push_back(f.str());
        rep.results["sections"] = std::move(sections);
    } else if (action == "classify") {
        TupleClassification cls = classify_lir(doc.lattice);
        const bool lir = cls.kind == TupleClassification::Kind::lir;
        rep.results["classification"] = lir ? "lir" : "nir";
        if (lir) {
            Json u = Json::array();
            for (int r = 0; r < cls.witness_u.rows(); ++r) {
                Json row = Json::array();
                for (int c = 0; c < cls.witness_u.cols(); ++c)
                    row.push_back(cls.witness_u.at(r, c).convert_to<long long>());
                u.push_back(std::move(row));
            }
            rep.results["witness_u"] = std::move(u);
            Json shifts = Json::array();
            for (const auto& s : cls.shifts) {
                Json row = Json::array();
                for (int c : s) row.push_back(c);
                shifts.push_back(std::move(row));
            }
            rep.results["shifts"] = std::move(shifts);
        } else {
            rep.results["refuted_choices"] = cls.refuted_choices;
        }
    } else if (action == "codim") {
        DiscriminantInstance inst = build_instance(doc.lattice);
        const std::uint64_t p = prime != 0 ? prime : 1000003;
        rep.prime = p;
        rep.seeded = true;
        rep.seed = seed;
        CodimEstimate est = estimate_codim(inst, p, trials > 0 ? trials : 20, seed, mode);
        rep.results["codim"] = est.codim;
        rep.results["fiber"] = est.fiber_dim;
        Json votes = Json::array();
        for (const auto& [key, count] : est.votes) {
            Json row;
            row["codim"] = key.first;
            row["fiber"] = key.second;
            row["count"] = count;
            votes.push_back(std::move(row));
        }
        rep.results["votes"] = std::move(votes);
        rep.results["discarded"] = est.discarded;
        rep.results["trials"] = est.trials;
        if (est.codim < 0) {
            rep.ok = false;
            rep.failures.push_back("every sample was singular; no codimension estimate");
        }
    } else if (action == "eliminate") {
        if (doc.lattice.size() != 1 || doc.lattice.ambient_rank != 1)
            throw InputError(
                "elimination handles a single point set in rank one; got " +
                std::to_string(doc.lattice.size()) + " sets in rank " +
                std::to_string(doc.lattice.ambient_rank));
        std::vector<int> exponents;
        for (const auto& pt : doc.lattice.sets[0]) exponents.push_back(pt[0]);
        std::sort(exponents.begin(), exponents.end());
        Poly<Rat> disc = univariate_discriminant(exponents);
        rep.results["exponents"] = exponents;
        rep.results["discriminant"] = disc.str();
    } else {
        throw InputError("unknown discriminant action \"" + action +
                         "\"; expected build, classify, codim, or eliminate");
    }
    apply_expectations(rep, doc.expect);
    return rep;
}

// Deterministic random instance files. For subspace tuples dims lists the
// subspace dimensions; for lattice tuples dims lists the number of points
// per set, and every set contains the origin by construction.
inline InstanceDoc cmd_random(const std::string& kind, const std::vector<int>& dims,
                              int ambient, int bound, std::uint64_t seed) {
    if (dims.empty()) throw InputError("dims must be a nonempty list");
    if (dims.size() > 32) throw InputError("tuple length exceeds 32");
    if (ambient < 1) throw InputError("ambient dimension must be positive");
    if (bound < 1) throw InputError("coordinate bound must be positive");

    InstanceDoc doc;
    Rng rng(seed);
    std::string dims_tag;
    for (std::size_t i = 0; i < dims.size(); ++i)
        dims_tag += (i ? "x" : "") + std::to_string(dims[i]);

    if (kind == "subspace") {
        doc.kind = InstanceDoc::Kind::subspace;
        doc.ambient = ambient;
        for (int d : dims) {
            if (d < 1 || d > ambient)
                throw InputError("subspace dimensions must lie in [1, ambient]");
            Matrix<Rat> m(d, ambient, RatCtx{});
            for (int tries = 0;; ++tries) {
                if (tries >= 1000) throw MathError("failed to sample a full rank matrix");
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < ambient; ++c)
                        m.at(r, c) = Rat(rng.int_range(-bound, bound));
                if (rank(m) == d) break;
            }
            std::vector<std::vector<Rat>> rows;
            for (int r = 0; r < d; ++r) {
                std::vector<Rat> row;
                for (int c = 0; c < ambient; ++c) row.push_back(m.at(r, c));
                rows.push_back(std::move(row));
            }
            doc.generators.push_back(std::move(rows));
        }
        doc.name = "random-subspace-" + dims_tag + "-seed" + std::to_string(seed);
        for (int d : dims)
            if (d < 2)
                doc.warning =
                    "a subspace of dimension 1 breaks the genericity hypothesis of the "
                    "random span experiment";
        to_rat_tuple(doc);  // construction sanity check
    } else if (kind == "lattice") {
        doc.kind = InstanceDoc::Kind::lattice;
        doc.lattice.ambient_rank = ambient;
        double cell = 2.0 * bound + 1.0;
        double box = 1.0;
        for (int i = 0; i < ambient && box < 1e9; ++i) box *= cell;
        for (int count : dims) {
            if (count < 1) throw InputError("each set needs at least one point");
            if (static_cast<double>(count) > box)
                throw InputError("coordinate bound too small for " + std::to_string(count) +
                                 " distinct points");
            std::vector<std::vector<int>> pts;
            std::set<std::vector<int>> seen;
            std::vector<int> origin(ambient, 0);
            pts.push_back(origin);
            seen.insert(origin);
            while (static_cast<int>(pts.size()) < count) {
                std::vector<int> pt;
                for (int c = 0; c < ambient; ++c)
                    pt.push_back(static_cast<int>(rng.int_range(-bound, bound)));
                if (seen.insert(pt).second) pts.push_back(std::move(pt));
            }
            doc.lattice.sets.push_back(std::move(pts));
        }
        doc.name = "random-lattice-" + dims_tag + "-seed" + std::to_string(seed);
        for (int count : dims)
            if (count < 2) doc.warning = "a singleton point set spans no direction";
        validate_lattice_tuple(doc.lattice);
    } else {
        throw InputError("unknown instance kind \"" + kind + "\"; expected subspace or lattice");
    }
    return doc;
}

namespace detail {

inline void flatten_json(const Json& j, const std::string& prefix,
                         std::vector<std::string>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
        return;
    }
    if (j.is_array()) {
        bool scalars = true;
        for (const Json& e : j) scalars = scalars && !e.is_structured();
        if (scalars) {
            out.push_back(prefix + ": " + j.dump());
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    if (j.is_string()) {
        out.push_back(prefix + ": " + j.get<std::string>());
        return;
    }
    out.push_back(prefix + ": " + j.dump());
}

}  // namespace detail

inline std::string render_json(const RunReport& rep) {
    Json j;
    j["command"] = rep.command;
    Json inst = Json::object();
    if (!rep.name.empty()) inst["name"] = rep.name;
    if (!rep.digest.empty()) inst["digest"] = rep.digest;
    if (!inst.empty()) j["instance"] = std::move(inst);
    if (rep.seeded) j["seed"] = rep.seed;
    if (rep.prime != 0) j["prime"] = rep.prime;
    j["results"] = rep.results;
    if (!rep.checked_expectations.empty()) j["checked_expectations"] = rep.checked_expectations;
    if (!rep.failures.empty()) j["failures"] = rep.failures;
    j["ok"] = rep.ok;
    return j.dump(2) + "\n";
}

inline std::string render_text(const RunReport& rep) {
    std::string out;
    out += "command: " + rep.command + "\n";
    if (!rep.name.empty()) out += "instance: " + rep.name + "\n";
    if (!rep.digest.empty()) out += "digest: " + rep.digest + "\n";
    if (rep.seeded) out += "seed: " + std::to_string(rep.seed) + "\n";
    if (rep.prime != 0) out += "prime: " + std::to_string(rep.prime) + "\n";
    std::vector<std::string> lines;
    detail::flatten_json(rep.results, "", lines);
    for (const auto& l : lines) out += l + "\n";
    for (const auto& k : rep.checked_expectations) out += "checked expectation: " + k + "\n";
    for (const auto& f : rep.failures) out += "failure: " + f + "\n";
    out += std::string("ok: ") + (rep.ok ? "yes" : "no") + "\n";
    return out;
}

}  // namespace detlab
