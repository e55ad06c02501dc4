"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict that is printed in the terminal summary.
"""
import itertools
import random

from gen import eps_term, random_formula, random_terms, random_type
from oracles import ORDER, lemma_conditions, marked_pair, table_cell

from negarith.extraction import InductionMode, Kind, Variant, assemble, extract, size_report
from negarith.families import application_chain, shared_chain
from negarith.logic import FALSITY, Implies, check_proof, fa, formula_eq, mk_efq, mk_stability, neg
from negarith.runtime.bench import BENCH_VARIANTS, bench_average, bench_induction
from negarith.runtime.corpus import corpus, entry
from negarith.runtime.evaluator import evaluate, run_deep
from negarith.runtime.model import FiniteModel
from negarith.runtime.verify import (
    Verifier, brute_force_first_counterexample, brute_force_last_counterexample,
)
from negarith.terms import (
    EPS_T, App, Fst, Lam, Pair, Snd, Var, alpha_eq, epsilon_simplify_term,
    epsilon_simplify_type, infer_type, normalize, normalize_by_steps, numeral, reduce_step,
)
from negarith.types import EPS, NAT, Arrow, Prod

SEARCH = entry("linear_search")


def test_criterion_1_marked_selection_table(report):
    cases = deviations = 0
    for m1, m2 in itertools.product(ORDER, ORDER):
        for c1 in (True, False):
            got, stats = marked_pair(m1, m2, c1, True)
            cases += 1
            deviations += got != table_cell(m1, m2, c1) or stats.tc_checks > 1
    report(1, cases == 18 and deviations == 0, f"{cases} cells, {deviations} deviations")


def test_criterion_2_marker_conditions(report):
    grid = [lemma_conditions(m1, m2, c1, c2)
            for m1, m2 in itertools.product(ORDER, ORDER)
            for c1, c2 in itertools.product((True, False), repeat=2)]
    honest = [g for g in grid if g is not None]
    failures = honest.count(False)
    report(2, len(honest) == 25 and failures == 0,
           f"{len(honest)} honest grid points, {failures} failures")


SOUNDNESS_VARIANTS = [
    Variant(Kind.QUASILINEAR, InductionMode.SIMULTANEOUS),
    Variant(Kind.MARKED, InductionMode.SIMULTANEOUS),
    Variant(Kind.QUASILINEAR, InductionMode.SIMULTANEOUS, True),
    Variant(Kind.QUASILINEAR, InductionMode.NAIVE),
    Variant(Kind.QUASILINEAR, InductionMode.FLAGGED),
    Variant(Kind.MARKED, InductionMode.FLAGGED),
]


def test_criterion_3_instance_soundness(report):
    model = FiniteModel()
    entries = corpus()
    runs = fails = small = 0
    total = 0
    for e in entries:
        for v in SOUNDNESS_VARIANTS:
            s = Verifier(e.proof, v).run(model, budget=1000)
            runs += 1
            total += s.instances
            fails += len(s.failures)
            # fewer than 1000 instances is only allowed when the space was covered exhaustively
            if s.instances < 1000:
                space = Verifier(e.proof, v).space(model)
                small += len(list(itertools.product(*space.values()))) != s.instances
    ok = len(entries) >= 6 and fails == 0 and small == 0
    report(3, ok, f"{len(entries)} proofs x {len(SOUNDNESS_VARIANTS)} variants, "
                  f"{total} instances, {fails} FAIL")


def _growth(family, ns, variant):
    reps = [size_report(p, extract(p, variant)) for p in map(family, ns)]
    ratios = [r["ratio"] for r in reps]
    per_node = [r["extracted_size"] / r["proof_size"] for r in reps]
    return reps, (max(ratios) - min(ratios)) / min(ratios), max(per_node) / min(per_node)


def test_criterion_4_size_bound_trend(report, note):
    ns = [4, 8, 16, 32]
    details, ok = [], True
    for v in (Variant(Kind.QUASILINEAR), Variant(Kind.MARKED)):
        reps, spread, linear = _growth(application_chain, ns, v)
        ok &= spread < 0.15 and linear <= 1.25 and all(r["msl"] == reps[0]["msl"] for r in reps)
        details.append(f"{v.kind.value}: ratio spread {spread:.1%}, size/proof growth {linear:.2f}x")
    for v in (Variant(Kind.QUASILINEAR), Variant(Kind.MARKED)):
        reps, spread, _ = _growth(shared_chain, ns, v)
        note(f"shared_chain {v.kind.value}: ratios "
             + ", ".join(f"{r['ratio']:.1f}" for r in reps) + f" (spread {spread:.0%})")
    report(4, ok, "; ".join(details))


def test_criterion_5_quadratic_vs_linear(report):
    n = 128
    naive = bench_induction(SEARCH, n, None, BENCH_VARIANTS["naive"]).stats.rec_unfolds
    simul = bench_induction(SEARCH, n, None, BENCH_VARIANTS["simultaneous"]).stats.rec_unfolds
    report(5, naive >= n * n / 4 and simul <= 4 * n,
           f"n={n}: naive rec_unfolds={naive} (>= {n * n // 4}), "
           f"simultaneous rec_unfolds={simul} (<= {4 * n})")


def test_criterion_6_early_termination(report):
    n = 128
    ok, parts = True, []
    for k in (0, 3, 16):
        fl = bench_induction(SEARCH, n, k, BENCH_VARIANTS["flagged"]).stats.tc_checks
        mf = bench_induction(SEARCH, n, k, BENCH_VARIANTS["marked-flagged"]).stats.tc_checks
        ql = bench_induction(SEARCH, n, k, BENCH_VARIANTS["simultaneous-reversed"]).stats.tc_checks
        ok &= fl <= k + 2 and mf <= k + 2 and ql >= n - 1
        parts.append(f"K={k}: flagged {fl}, marked-flagged {mf}, quasilinear {ql}")
    avg = bench_average(SEARCH, n, 200, "uniform", seed=0)
    target = avg["expected_k"] + 1
    rel = abs(avg["mean_tc_checks"] - target) / target
    ok &= rel <= 0.10
    parts.append(f"mean tc {avg['mean_tc_checks']:.2f} vs E[K]+1={target:.1f} ({rel:.1%})")
    report(6, ok, "; ".join(parts))


def test_criterion_7_orientation(report):
    c = fa(SEARCH.proof)["u"]
    plain = assemble(extract(SEARCH.proof, Variant(Kind.QUASILINEAR))).minus["u"]
    rev = assemble(extract(SEARCH.proof, Variant(Kind.QUASILINEAR, reversed=True))).minus["u"]
    cases = deviations = 0
    for table in itertools.product((False, True), repeat=4):
        for n in range(11):
            model = FiniteModel(nat_bound=n + 1, bindings={"n": n, "f": list(table)})
            cands = [numeral(i) for i in range(n + 1)]
            last = brute_force_last_counterexample(c, EPS_T, cands, model)
            first = brute_force_first_counterexample(c, EPS_T, cands, model)
            got_last, got_first = evaluate(plain, model)[0], evaluate(rev, model)[0]
            cases += 1
            if last is None:
                # no refuting candidate: any candidate is an acceptable answer
                deviations += not (0 <= got_last <= n and 0 <= got_first <= n)
            else:
                deviations += (got_last, got_first) != (last, first)
    report(7, cases == 176 and deviations == 0,
           f"16 tables x n in 0..10 = {cases} cases, {deviations} deviations")


def test_criterion_8_kernel_health(report):
    terms = random_terms(2024, 10 ** 4, max_size=40, free={"g": Arrow(NAT, NAT)})

    def check_all():
        bad = 0
        for t in terms:
            ty = infer_type(t)
            n1 = normalize(t)
            n2 = normalize_by_steps(t, innermost=True)
            cur, steps = t, 0
            while (nxt := reduce_step(cur)) is not None and steps < 64:
                bad += infer_type(nxt) != ty
                cur, steps = nxt, steps + 1
            bad += reduce_step(n1) is not None
            bad += not alpha_eq(normalize(n1), n1)
            bad += not alpha_eq(n1, n2)
        return bad
    bad = run_deep(check_all)
    rng = random.Random(8)
    logic_bad = 0
    for _ in range(20):
        a = random_formula(rng, 4)
        logic_bad += not formula_eq(check_proof(mk_efq(a)), Implies(FALSITY, a))
        logic_bad += not formula_eq(check_proof(mk_stability(a)), Implies(neg(neg(a)), a))
    report(8, bad == 0 and logic_bad == 0,
           f"{len(terms)} terms, {bad} failures; 20 formulas, {logic_bad} efq/stability failures")


def _eps_rules():
    x, e = Var("x", NAT), Var("e", EPS)
    return [
        (epsilon_simplify_type(Prod(NAT, EPS)), NAT),
        (epsilon_simplify_type(Prod(EPS, NAT)), NAT),
        (epsilon_simplify_type(Arrow(NAT, EPS)), EPS),
        (epsilon_simplify_type(Arrow(EPS, NAT)), NAT),
        (epsilon_simplify_term(Fst(Var("p", Prod(NAT, EPS)))), Var("p", NAT)),
        (epsilon_simplify_term(Snd(Var("p", Prod(EPS, NAT)))), Var("p", NAT)),
        (epsilon_simplify_term(Pair(x, e)), x),
        (epsilon_simplify_term(Pair(e, x)), x),
        (epsilon_simplify_term(Lam("y", NAT, e)), EPS_T),
        (epsilon_simplify_term(Lam("y", EPS, x)), x),
        (epsilon_simplify_term(App(Var("h", Arrow(NAT, EPS)), x)), EPS_T),
        (epsilon_simplify_term(App(Var("h", Arrow(EPS, NAT)), e)), Var("h", NAT)),
    ]


def test_criterion_9_eps_table(report):
    rules = _eps_rules()
    rule_bad = sum(got != want for got, want in rules)
    rng = random.Random(9)
    bad = 0
    for _ in range(1000):
        ty = random_type(rng, 3, eps=True)
        t = eps_term(rng, ty, 4)
        bad += epsilon_simplify_type(infer_type(t)) != infer_type(epsilon_simplify_term(t))
        s = epsilon_simplify_type(ty)
        bad += epsilon_simplify_type(s) != s
    report(9, len(rules) == 12 and rule_bad == 0 and bad == 0,
           f"{len(rules)} rules, {rule_bad} mismatches; 1000 random types, {bad} failures")
