import random

import pytest
from gmpy2 import mpq

from cyclebound.case_engine import (
    CaseState,
    SearchConfig,
    audit_closed_case,
    branch,
    can_branch,
    exact_k_coefficient,
    find_closing_window,
    prove_average_bound,
    root_state,
    try_close,
)
from cyclebound.collatz import profile
from cyclebound.numerics import TriState


def _child(state, config, k, ell, ell_exact=True):
    for child in branch(state, config):
        last = child.affine_forms[-1]
        if last.k_exact and last.k == k and last.ell == ell and last.ell_exact == ell_exact:
            return child
    raise AssertionError(f"no child with k={k}, ell={ell}")


def _check_forms(state, parameters=range(1, 40)):
    """Compare every stored form against real trajectories."""
    for a in parameters:
        n1 = state.root_form(a)
        minima = profile(n1, state.min_count + 1).minima
        for index, record in enumerate(state.affine_forms):
            if index >= len(minima):
                break
            assert minima[index].n == record.form(a)
            if record.k_exact:
                assert minima[index].k == record.k
            else:
                assert minima[index].k >= record.k
            if record.ell_exact:
                assert minima[index].ell == record.ell
            else:
                assert minima[index].ell >= record.ell
        if state.pending_form is not None and len(minima) > state.min_count:
            assert minima[state.min_count].n == state.pending_form(a)


def _covers_once(states):
    """Every odd residue modulo the finest modulus lies in exactly one class."""
    exponent = max(state.modulus_exp for state in states)
    for residue in range(1, 1 << exponent, 2):
        owners = [
            state for state in states
            if residue % (1 << state.modulus_exp) == state.residue
        ]
        assert len(owners) == 1, f"residue {residue} in {len(owners)} classes"


@pytest.fixture
def unweighted():
    return SearchConfig.create("unweighted", "97/54", 3, k_cap=6, ell_cap=6)


@pytest.fixture
def small_caps():
    return SearchConfig.create("unweighted", "97/54", 3, k_cap=3, ell_cap=4)


@pytest.fixture
def weighted():
    return SearchConfig.create("weighted", "3/4", 3, k_cap=6, ell_cap=6)


class TestSearchConfig:
    def test_nonpositive_target(self):
        """Test that a nonpositive target is refused"""
        with pytest.raises(ValueError) as exc_info:
            SearchConfig.create("unweighted", 0, 3)
        assert "target_coef must be positive" in str(exc_info.value)

    def test_small_concrete_x0(self):
        """Test that a concrete X0 below the analytic floor is refused"""
        with pytest.raises(ValueError) as exc_info:
            SearchConfig.create("weighted", "3/4", 3, x0=100)
        assert "at least 766" in str(exc_info.value)

    def test_hash_depends_on_fields(self):
        """Test that the config hash tracks every field"""
        first = SearchConfig.create("unweighted", "97/54", 3)
        assert first.config_hash() == SearchConfig.create("unweighted", "97/54", 3).config_hash()
        assert first.config_hash() != SearchConfig.create("unweighted", "97/54", 4).config_hash()


class TestBranching:
    def test_k2_single_halving(self, unweighted):
        """Test the class n1 = 8a+3 with successor 9a+4"""
        child = _child(root_state(), unweighted, k=2, ell=1)
        assert child.residue % 8 == 3
        for a in range(20):
            n1 = child.root_form(a)
            assert child.pending_form(a) == 9 * ((n1 - 3) // 8) + 4
        _check_forms(child)

    def test_k2_then_k3(self, unweighted):
        """Test the class n1 = 128a+91 with second successor 243a+175"""
        child = _child(root_state(), unweighted, k=2, ell=1)
        grandchild = _child(child, unweighted, k=3, ell=1)
        assert grandchild.residue % 128 == 91
        for a in range(20):
            n1 = grandchild.root_form(a)
            assert grandchild.pending_form(a) == 243 * ((n1 - 91) // 128) + 175
        _check_forms(grandchild)

    def test_k3(self, unweighted):
        """Test the class n1 = 16a+7 with successor 27a+13"""
        child = _child(root_state(), unweighted, k=3, ell=1)
        assert child.residue % 16 == 7
        for a in range(20):
            n1 = child.root_form(a)
            assert child.pending_form(a) == 27 * ((n1 - 7) // 16) + 13

    def test_root_partition(self, small_caps):
        """Test that the children of the root partition the odd numbers"""
        children = branch(root_state(), small_caps)
        _covers_once(children)
        for child in children:
            _check_forms(child)

    def test_second_level_partition(self, small_caps):
        """Test the partition one level further down"""
        level = []
        for child in branch(root_state(), small_caps):
            if can_branch(child, small_caps):
                grandchildren = branch(child, small_caps)
                level.extend(grandchildren)
                for grandchild in grandchildren:
                    assert grandchild.residue % (1 << child.modulus_exp) == child.residue
                    _check_forms(grandchild, range(1, 10))
            else:
                level.append(child)
        _covers_once(level)

    def test_open_halving_run(self, small_caps):
        """Test that an ell >= 2 case splits on the next halving"""
        child = _child(root_state(), small_caps, k=1, ell=2, ell_exact=False)
        assert child.open_even_form is not None
        grandchildren = branch(child, small_caps)
        assert len(grandchildren) == 2
        _covers_once(grandchildren)
        assert grandchildren[0].affine_forms[-1].ell_exact
        assert grandchildren[0].affine_forms[-1].ell == 2
        assert grandchildren[1].affine_forms[-1].ell == 3
        for grandchild in grandchildren:
            _check_forms(grandchild)

    def test_nothing_to_branch(self, unweighted):
        """Test that a terminal state cannot be branched"""
        child = _child(root_state(), unweighted, k=1, ell=1)
        terminal = CaseState(
            modulus_exp=child.modulus_exp,
            residue=child.residue,
            affine_forms=child.affine_forms
        )
        with pytest.raises(ValueError) as exc_info:
            branch(terminal, unweighted)
        assert "nothing to branch on" in str(exc_info.value)


class TestClosing:
    def test_exact_k_coefficient(self):
        """Test the coefficient of a fixed odd-run length"""
        assert exact_k_coefficient(1) == 1
        assert exact_k_coefficient(2) == mpq(5, 3)
        assert exact_k_coefficient(3) == mpq(19, 9)

    def test_k1_closes_weighted(self, weighted):
        """Test that k=1 closes alone: n1 >= 4/3 X0 gives T < 3/4 / X0"""
        child = _child(root_state(), weighted, k=1, ell=1)
        window = find_closing_window(child, weighted)
        assert window is not None
        assert window.length == 1
        assert try_close(child, weighted) is TriState.TRUE

    def test_k2_merger_closes_weighted(self, weighted):
        """Test that k=2 followed by two halvings closes through the merger bound"""
        child = _child(root_state(), weighted, k=2, ell=2, ell_exact=False)
        assert try_close(child, weighted) is TriState.TRUE

    def test_k2_single_halving_open(self, weighted):
        """Test that k=2 with one halving needs the successor"""
        child = _child(root_state(), weighted, k=2, ell=1)
        assert try_close(child, weighted) is TriState.UNKNOWN

    def test_unclosable_at_depth(self):
        """Test that an open case at full depth is FALSE"""
        config = SearchConfig.create("unweighted", 1, 1)
        child = _child(root_state(), config, k=2, ell=1)
        assert try_close(child, config) is TriState.FALSE


class TestProveAverageBound:
    def test_unweighted_97_54(self):
        """Test the three-minimum average bound 97/54"""
        outcome = prove_average_bound(SearchConfig.create("unweighted", "97/54", 3))
        assert outcome.proven
        assert outcome.witnesses == ()
        assert outcome.nodes_closed > 0

    def test_weighted_3_4(self):
        """Test the weighted bound 3/4 per odd step"""
        assert prove_average_bound(SearchConfig.create("weighted", "3/4", 3)).proven

    def test_unweighted_35_18(self):
        """Test the two-minimum average bound 35/18"""
        assert prove_average_bound(SearchConfig.create("unweighted", "35/18", 2)).proven

    def test_target_one_fails(self):
        """Test that 1/X0 per minimum is not provable with one minimum"""
        outcome = prove_average_bound(SearchConfig.create("unweighted", 1, 1))
        assert not outcome.proven
        assert outcome.witnesses
        assert any(state.residue % 8 == 3 for state in outcome.witnesses)
        assert outcome.witnesses == tuple(sorted(outcome.witnesses, key=lambda s: s.sort_key()))

    def test_determinism_across_workers(self):
        """Test that the verdict and witnesses do not depend on the worker count"""
        config = SearchConfig.create("unweighted", "3/2", 2, k_cap=8, ell_cap=8)
        serial = prove_average_bound(config)
        parallel = prove_average_bound(config, workers=2)
        assert serial.proven == parallel.proven
        assert serial.nodes_explored == parallel.nodes_explored
        assert sorted(s.describe() for s in serial.witnesses) == sorted(
            s.describe() for s in parallel.witnesses
        )

    def test_node_budget(self):
        """Test that a tiny budget leaves the search unproven"""
        config = SearchConfig.create("unweighted", "97/54", 3, node_budget=1, frontier_size=2)
        outcome = prove_average_bound(config)
        assert outcome.budget_exhausted
        assert not outcome.proven

    def test_modulus_ceiling(self):
        """Test that nodes beyond the modulus ceiling become witnesses"""
        config = SearchConfig.create("unweighted", "97/54", 3, modulus_exp_ceiling=3)
        outcome = prove_average_bound(config)
        assert not outcome.proven
        assert all(state.modulus_exp > 3 or not can_branch(state, config) for state in outcome.witnesses)

    def test_invalid_workers(self):
        """Test that zero workers is refused"""
        with pytest.raises(ValueError) as exc_info:
            prove_average_bound(SearchConfig.create("unweighted", "97/54", 3), workers=0)
        assert "workers must be positive" in str(exc_info.value)

    def test_concrete_never_explores_more(self):
        """Test that a concrete X0 closes at least as early as the symbolic bounds"""
        symbolic = prove_average_bound(SearchConfig.create("unweighted", "97/54", 3))
        concrete = prove_average_bound(SearchConfig.create("unweighted", "97/54", 3, x0=704 << 60))
        assert concrete.proven
        assert concrete.nodes_explored <= symbolic.nodes_explored

    def test_concrete_leaves_fewer_open(self):
        """Test that X0 = 704 * 2^60 closes classes whose least member is far above X0"""
        symbolic = prove_average_bound(SearchConfig.create("unweighted", "1", 1))
        concrete = prove_average_bound(SearchConfig.create("unweighted", "1", 1, x0=704 << 60))
        assert not symbolic.proven
        assert concrete.max_modulus_exp_reached > 70
        assert len(concrete.witnesses) < len(symbolic.witnesses)
        assert concrete.nodes_explored <= symbolic.nodes_explored


class TestAudit:
    @pytest.mark.parametrize("mode, target, depth", [
        ("weighted", "3/4", 3),
        ("unweighted", "97/54", 3),
    ])
    def test_closed_cases_hold(self, mode, target, depth):
        """Test closed cases against sampled concrete trajectories"""
        x0 = 10**6
        config = SearchConfig.create(mode, target, depth, x0=x0)
        outcome = prove_average_bound(config, record_closed=True)
        assert outcome.proven
        rng = random.Random(7)
        cases = outcome.closed_cases
        for closed in rng.sample(cases, min(40, len(cases))):
            report = audit_closed_case(closed, config, x0, samples=25, rng=rng)
            assert report.passed, report.failures[:3]

    @pytest.mark.slow
    @pytest.mark.parametrize("mode, target, depth", [
        ("weighted", "3/4", 3),
        ("unweighted", "97/54", 3),
    ])
    def test_every_closed_case_holds(self, mode, target, depth):
        """Test every closed case with 100 sampled starts each"""
        x0 = 10**6
        config = SearchConfig.create(mode, target, depth, x0=x0)
        outcome = prove_average_bound(config, record_closed=True)
        assert outcome.proven
        assert len(outcome.closed_cases) == outcome.nodes_closed
        rng = random.Random(11)
        for closed in outcome.closed_cases:
            report = audit_closed_case(closed, config, x0, samples=100, rng=rng)
            assert report.passed, report.failures[:3]

    def test_x0_mismatch(self):
        """Test that auditing a concrete search with another X0 is refused"""
        config = SearchConfig.create("weighted", "3/4", 3, x0=10**6)
        outcome = prove_average_bound(config, record_closed=True)
        with pytest.raises(ValueError) as exc_info:
            audit_closed_case(outcome.closed_cases[0], config, 10**7)
        assert "audit asked for" in str(exc_info.value)
