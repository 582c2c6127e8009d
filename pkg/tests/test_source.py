import numpy as np
import pytest

from entfidelity.channels import ChannelSpec
from entfidelity.fidelity import fe_closed_form
from entfidelity.source import (
    Objective,
    Regime,
    TwoLetterSource,
    argopt_p,
    classify_regime,
    fe_two_letter,
    golden_section,
    source_state,
)
from entfidelity.state import StateError, qubit_state

GRID = np.linspace(0, 1, 21)
PARAMS = (0, 0.1, 0.5, 0.9, 1)


def family_specs(v):
    return [
        ChannelSpec.identity(),
        ChannelSpec.pauli_x(v),
        ChannelSpec.dephasing(v),
        ChannelSpec.depolarizing(v),
        ChannelSpec.amplitude_damping(v),
        ChannelSpec.weyl(1 - v, v / 2, v / 3, v / 6),
        ChannelSpec.werner_holevo(),
    ]


def test_bell_source_is_maximally_mixed():
    np.testing.assert_array_equal(qubit_state(source_state(TwoLetterSource(0.5, 0.5))).matrix, np.eye(2) / 2)


@pytest.mark.parametrize("p", [0, 0.2, 0.5, 0.9, 1])
def test_q_one_gives_pure_letter(p):
    rho = qubit_state(source_state(TwoLetterSource(p, 1))).matrix
    assert np.linalg.matrix_rank(rho, tol=1e-12) == 1
    plus, _ = TwoLetterSource(p, 1).letters()
    np.testing.assert_allclose(rho, plus @ plus.conj().T, atol=1e-15)


def test_source_state_matches_mixture():
    src = TwoLetterSource(0.25, 0.75)
    params = source_state(src)
    assert params.a == 0.25
    assert params.c == pytest.approx(0.5 * np.sqrt(0.1875), abs=1e-16)
    np.testing.assert_allclose(params.matrix(), src.mixture(), atol=1e-15)
    for p in GRID:
        for q in GRID:
            s = TwoLetterSource(p, q)
            np.testing.assert_allclose(source_state(s).matrix(), s.mixture(), atol=1e-15)


def test_source_rejects_out_of_range():
    with pytest.raises(StateError):
        TwoLetterSource(1.1, 0.5)
    with pytest.raises(StateError):
        TwoLetterSource(0.5, -0.1)


def test_table_two_examples():
    for p in GRID:
        for q in GRID:
            assert fe_two_letter(TwoLetterSource(p, q), ChannelSpec.werner_holevo()).value == 0
    for u in PARAMS:
        val = fe_two_letter(TwoLetterSource(0.5, 0.3), ChannelSpec.dephasing(u)).value
        assert val == pytest.approx(1 - u, abs=1e-15)
    for g in PARAMS:
        for q in (0, 0.3, 1):
            assert fe_two_letter(TwoLetterSource(1, q), ChannelSpec.amplitude_damping(g)).value == 1
    for u in (0.2, 0.8):
        val = fe_two_letter(TwoLetterSource(0.5, 0.5), ChannelSpec.depolarizing(u)).value
        assert val == pytest.approx(1 - 0.75 * u, abs=1e-15)


def test_table_two_is_table_one_substituted():
    worst = 0.0
    for v in PARAMS:
        for spec in family_specs(v):
            for p in GRID:
                for q in GRID:
                    src = TwoLetterSource(p, q)
                    a = fe_two_letter(src, spec).value
                    b = fe_closed_form(source_state(src), spec).value
                    worst = max(worst, abs(a - b))
    assert worst <= 1e-12


def test_q_reflection_symmetry():
    for v in PARAMS:
        for spec in family_specs(v):
            for p in GRID:
                for q in GRID:
                    a = fe_two_letter(TwoLetterSource(p, q), spec).value
                    b = fe_two_letter(TwoLetterSource(p, 1 - q), spec).value
                    assert abs(a - b) <= 1e-12


def test_p_reflection_symmetry():
    for v in PARAMS:
        for spec in (ChannelSpec.pauli_x(v), ChannelSpec.dephasing(v), ChannelSpec.depolarizing(v)):
            for p in GRID:
                for q in GRID:
                    a = fe_two_letter(TwoLetterSource(p, q), spec).value
                    b = fe_two_letter(TwoLetterSource(1 - p, q), spec).value
                    assert abs(a - b) <= 1e-12
    ad = ChannelSpec.amplitude_damping(0.5)
    lo = fe_two_letter(TwoLetterSource(0.2, 1), ad).value
    hi = fe_two_letter(TwoLetterSource(0.8, 1), ad).value
    assert abs(lo - hi) > 1e-3


@pytest.mark.parametrize("u", [0.1, 0.5, 1])
def test_pauli_x_flat_at_unbiased_q(u):
    for p in GRID:
        val = fe_two_letter(TwoLetterSource(p, 0.5), ChannelSpec.pauli_x(u)).value
        assert val == pytest.approx(1 - u, abs=1e-15)


@pytest.mark.parametrize(
    "p,q,regime",
    [
        (0, 0.3, Regime.SINGLE_LETTER_P),
        (1, 0.5, Regime.SINGLE_LETTER_P),
        (0.3, 0, Regime.SINGLE_LETTER_Q),
        (0.5, 1, Regime.SINGLE_LETTER_Q),
        (0.5, 0.3, Regime.ORTHOGONAL),
        (0.3, 0.3, Regime.GENERIC),
        (0.5 + 1e-16, 0.3, Regime.ORTHOGONAL),
        (0.5 + 1e-12, 0.3, Regime.GENERIC),
    ],
)
def test_classify_regime(p, q, regime):
    assert classify_regime(TwoLetterSource(p, q)) is regime


def test_golden_section_quadratic():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2, 0, 1)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0, abs=1e-16)


def test_argopt_pauli_x_max_at_half():
    opt = argopt_p(ChannelSpec.pauli_x(0.5), 0.9, Objective.MAX)
    assert opt.p_star == 0.5
    assert opt.value == pytest.approx(1 + 0.5 * (0.64 - 1))
    # an even grid misses 0.5; refinement must find it
    opt = argopt_p(ChannelSpec.pauli_x(0.5), 0.9, "max", grid_n=200)
    assert opt.p_star == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("q", [0, 0.2, 0.5, 0.9])
def test_argopt_dephasing(q):
    spec = ChannelSpec.dephasing(0.7)
    lo = argopt_p(spec, q, "min")
    assert lo.p_star == pytest.approx(0.5, abs=1e-9)
    assert lo.value == pytest.approx(0.3, abs=1e-12)
    hi = argopt_p(spec, q, "max")
    assert hi.p_star == 0.0
    assert hi.value == 1.0


def test_argopt_amplitude_damping_prefers_ground():
    for q in (0.1, 0.5, 0.9):
        opt = argopt_p(ChannelSpec.amplitude_damping(0.4), q, "max", grid_n=51)
        assert opt.p_star == 1.0
        assert opt.value == 1.0


def test_argopt_interior_minimum_refined():
    # depolarizing minimum at p = 1/2 located from a grid that misses it
    opt = argopt_p(ChannelSpec.depolarizing(0.6), 0.8, "min", grid_n=4)
    assert opt.p_star == pytest.approx(0.5, abs=1e-6)


def test_argopt_grid_size():
    with pytest.raises(ValueError):
        argopt_p(ChannelSpec.dephasing(0.5), 0.5, "min", grid_n=2)
