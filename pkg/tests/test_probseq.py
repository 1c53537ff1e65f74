import math

import pytest
from hypothesis import given, settings, strategies as st

from graphdraw import probseq as ps
from graphdraw.probseq import (BlockPlan, BlockPlanError, Constant,
                               GeometricToZero, Interleave, InverseLog,
                               OneMinus, Opaque, SeqClass, Table,
                               TruncationTooSmall, classify, parse,
                               partial_sums, plan_blocks, split_summable,
                               subsequence_odd)


def seq(text):
    return parse(text)


# --- evaluation ---------------------------------------------------------------

def test_eval_constant():
    assert seq("const:0.5").eval(7) == 0.5


def test_eval_geometric():
    assert seq("geom:0.5").eval(3) == 1 / 16


def test_eval_interleave_co_branch():
    s = seq("interleave(geom:0.5,1-(geom:0.5))")
    assert s.eval(1) == 0.5
    assert s.eval(0) == 0.5
    assert s.eval(2) == 0.25
    assert s.eval(3) == 0.75


def test_eval_table_prefix_then_tail():
    t = Table((0.3, 0.8), seq("const:0.5"))
    assert t.eval(0) == 0.3
    assert t.eval(1) == 0.8
    assert t.eval(2) == 0.5
    assert t.eval(10) == 0.5


def test_eval_rejects_negative_index():
    with pytest.raises(ValueError):
        seq("const:0.5").eval(-1)


def test_construction_rejects_boundary_values():
    for bad in (0.0, 1.0, -0.25, 1.5):
        with pytest.raises(ValueError):
            Constant(bad)
    with pytest.raises(ValueError):
        GeometricToZero(1.0)
    with pytest.raises(ValueError):
        InverseLog(2.0)  # p_0 would hit 1/ln(2) > 1
    with pytest.raises(ValueError):
        Table((0.5, 1.0), seq("const:0.5"))


def test_eval_clamps_underflowing_tails():
    g = seq("geom:0.5")
    deep = g.eval(10_000)
    assert 0.0 < deep < 1.0
    mirrored = OneMinus(g).eval(10_000)
    assert 0.0 < mirrored < 1.0


_DESCRIPTORS = st.deferred(lambda: st.one_of(
    st.sampled_from([
        seq("const:0.5"), Constant(0.125), Constant(0.9),
        seq("invlog:3"), InverseLog(4.5),
        seq("geom:0.5"), GeometricToZero(0.2),
    ]),
    st.builds(OneMinus, _DESCRIPTORS),
    st.builds(Interleave, _DESCRIPTORS, _DESCRIPTORS),
    st.builds(Table, st.tuples(st.sampled_from([0.25, 0.5, 0.75])),
              _DESCRIPTORS),
))


@settings(max_examples=60, deadline=None)
@given(_DESCRIPTORS, st.integers(min_value=0, max_value=10 ** 6 - 1))
def test_eval_open_unit_interval(d, n):
    assert 0.0 < d.eval(n) < 1.0


@settings(max_examples=60, deadline=None)
@given(_DESCRIPTORS, st.integers(min_value=0, max_value=10 ** 4))
def test_eval_deterministic(d, n):
    assert d.eval(n) == d.eval(n)


# --- classification ------------------------------------------------------------

def test_classify_constant():
    assert classify(seq("const:0.5")).flags == frozenset({"Sep", "BC"})


def test_classify_geometric_summable():
    # Partial-sum oracle: sum 2^-(n+1) stays below the symbolic limit 1.
    flags = classify(seq("geom:0.5")).flags
    assert flags == frozenset({"SummableP"})
    last = 0.0
    for n in (10, 100, 1000):
        sp, _ = partial_sums(seq("geom:0.5"), 1, n)
        assert last <= sp <= 1.0
        last = sp


def test_classify_inverse_log():
    # Comparison-test oracle: ln^k(n) = o(n), so every power's partial sum
    # keeps growing, while (1-p_n)^k stays bounded below eventually.
    flags = classify(seq("invlog:3")).flags
    assert flags == frozenset({"BC", "BC0", "BC_M0"})
    s = seq("invlog:3")
    for k in (1, 2, 3):
        sp1, sq1 = partial_sums(s, k, 10_000)
        sp2, sq2 = partial_sums(s, k, 100_000)
        assert sp2 > sp1 + 1.0
        assert sq2 > sq1 + 1.0


def test_classify_acc01_interleave():
    flags = classify(seq("interleave(geom:0.5,1-(geom:0.5))")).flags
    assert flags == frozenset({"Acc01", "BC", "BC_M0", "BC_M1"})


def test_classify_table_uses_tail():
    t = Table((0.3,), seq("geom:0.5"))
    assert classify(t).flags == frozenset({"SummableP"})


def test_classify_opaque_unknown():
    o = Opaque(lambda n: 0.5)
    assert classify(o).flags == frozenset({"Unknown"})
    with pytest.raises(ValueError):
        o.text()


@settings(max_examples=80, deadline=None)
@given(_DESCRIPTORS)
def test_classify_one_minus_duality(d):
    base = classify(d).flags
    dual = classify(OneMinus(d)).flags
    swap = {"BC0": "BC1", "BC1": "BC0", "BC_M0": "BC_M1", "BC_M1": "BC_M0",
            "SummableP": "SummableCoP", "SummableCoP": "SummableP"}
    assert dual == frozenset(swap.get(f, f) for f in base)


def test_seqclass_invariants_enforced():
    with pytest.raises(ValueError):
        SeqClass(frozenset({"BC0"}))
    with pytest.raises(ValueError):
        SeqClass(frozenset({"SummableP", "BC"}))
    with pytest.raises(ValueError):
        SeqClass(frozenset({"NotAFlag"}))


# --- partial sums ----------------------------------------------------------------

def test_partial_sums_constant():
    assert partial_sums(seq("const:0.5"), 1, 10) == (5.0, 5.0)


def test_partial_sums_geometric():
    sp, sq = partial_sums(seq("geom:0.5"), 1, 20)
    assert sp == pytest.approx(1 - 2.0 ** -20, rel=1e-15)
    assert sq >= 19


def test_partial_sums_cubed():
    assert partial_sums(seq("const:0.5"), 3, 8) == (1.0, 1.0)


def test_partial_sums_validates():
    with pytest.raises(ValueError):
        partial_sums(seq("const:0.5"), 0, 10)
    with pytest.raises(ValueError):
        partial_sums(seq("const:0.5"), 1, 0)


# --- split_summable ---------------------------------------------------------------

def test_split_summable_geometric_flavor():
    s = seq("interleave(geom:0.5,1-(geom:0.5))")
    picked = split_summable(s, 1.0, 4096)
    assert len(picked) >= int(math.log2(4096))
    assert sum(s.eval(n) for n in picked) <= 1.0
    # Each selection sits below its level threshold.
    for j, n in enumerate(picked, start=1):
        assert s.eval(n) < 1.0 * 2.0 ** -(j + 1)


def test_split_summable_rejects_constant():
    with pytest.raises(ValueError):
        split_summable(seq("const:0.5"), 1.0, 100)


def test_split_summable_rejects_summable():
    with pytest.raises(ValueError):
        split_summable(seq("geom:0.5"), 1.0, 100)


def test_split_summable_inverse_log_truncation_too_small():
    # The thresholds force p_n < 2^-(j+1); with p_n = 1/ln(n+3) the level-j
    # pick needs n > e^(2^(j+1)), so any desk-scale truncation runs out of
    # qualifying indices after two levels.
    with pytest.raises(TruncationTooSmall):
        split_summable(seq("invlog:3"), 1.0, 10 ** 6)


# --- plan_blocks ---------------------------------------------------------------------

def test_plan_blocks_constant_k1():
    plan = plan_blocks(seq("const:0.5"), 1, 2.0, 1000)
    assert len(plan.blocks) == 8
    assert all(p == 0.25 for p in plan.probs)
    assert plan.running_sum == pytest.approx(2.0, rel=1e-12)


def test_plan_blocks_constant_k2():
    plan = plan_blocks(seq("const:0.5"), 2, 1.0, 1000)
    assert len(plan.blocks) == 16
    assert all(p == pytest.approx(1 / 16, rel=1e-12) for p in plan.probs)


def test_plan_blocks_inverse_log_recompute():
    s = seq("invlog:3")
    plan = plan_blocks(s, 1, 0.5, 1000)
    total = 0.0
    for blk in plan.blocks:
        edges, nonedges = blk[:1], blk[1:]
        total += math.prod(s.eval(n) for n in edges) * \
            math.prod(1 - s.eval(n) for n in nonedges)
    assert total >= 0.5
    assert total == pytest.approx(plan.running_sum, rel=1e-12)


def test_plan_blocks_disjoint_and_respects_reserved():
    s = seq("const:0.5")
    reserved = {0, 1, 2, 3}
    plan = plan_blocks(s, 1, 1.0, 1000, reserved=reserved)
    used = [n for blk in plan.blocks for n in blk]
    assert len(used) == len(set(used))
    assert not set(used) & reserved


def test_plan_blocks_leaves_gap_in_every_window():
    k = 2
    plan = plan_blocks(seq("const:0.5"), k, 3.0, 10_000)
    used = {n for blk in plan.blocks for n in blk}
    top = max(used)
    for start in range(0, top):
        window = set(range(start, start + 2 * k + 1))
        assert window - used, f"window at {start} fully consumed"


def test_plan_blocks_unreachable_target():
    with pytest.raises(BlockPlanError) as err:
        plan_blocks(seq("const:0.5"), 1, 100.0, 30)
    assert 0.0 < err.value.achieved < 100.0


def test_plan_blocks_requires_bc():
    with pytest.raises(ValueError):
        plan_blocks(seq("geom:0.5"), 1, 1.0, 100)


def test_block_plan_validates_disjointness():
    with pytest.raises(ValueError):
        BlockPlan(k=1, blocks=((0, 1), (1, 2)), probs=(0.25, 0.25),
                  running_sum=0.5)


# --- grammar round-trip -----------------------------------------------------------------

@settings(max_examples=120, deadline=None)
@given(_DESCRIPTORS)
def test_grammar_round_trip(d):
    assert parse(d.text()) == d


def test_grammar_examples():
    for text in ("const:0.5", "invlog:3", "geom:0.5", "1-(geom:0.5)",
                 "interleave(geom:0.5,1-(geom:0.5))",
                 "table[0.3,0.8](const:0.5)", "const:1/2", "invlog:7:2"):
        assert parse(text).text() == text


def test_grammar_rejects_junk():
    for text in ("", "foo:1", "interleave(const:0.5)", "table[0.5](", "1-()"):
        with pytest.raises(ValueError):
            parse(text)


def test_fraction_parameters_are_exact():
    from fractions import Fraction
    c = parse("const:1/3")
    assert c == Constant(Fraction(1, 3))
    assert c.eval(0) == float(Fraction(1, 3))


# --- odd thinning ------------------------------------------------------------------------

def test_subsequence_odd_matches_pointwise():
    cases = [seq("geom:0.5"), seq("invlog:3"), seq("const:0.5"),
             seq("1-(geom:0.5)"), seq("interleave(geom:0.5,1-(geom:0.5))"),
             Table((0.25, 0.75), seq("geom:0.5"))]
    for d in cases:
        thin = subsequence_odd(d)
        for m in range(40):
            assert thin.eval(m) == pytest.approx(d.eval(2 * m + 1), rel=1e-12)
