import numpy as np
import pytest

from entfidelity.channels import ChannelError, ChannelSpec, KrausChannel, build, remix
from entfidelity.fidelity import (
    FidelityError,
    FidelityResult,
    Method,
    cross_check,
    fe_closed_form,
    fe_kraus,
    fe_oracle,
)
from entfidelity.linalg import I2
from entfidelity.state import DensityOperator, QubitStateParams, maximally_mixed, purify, qubit_state

from _helpers import (
    random_density,
    random_isometry,
    random_qubit_params,
    random_unitary,
    random_weyl_probs,
)

MIXED = QubitStateParams(0.5, 0)


@pytest.mark.parametrize("u", [0, 0.25, 0.5, 1])
def test_mixed_state_pauli_x(u):
    rho, ch = maximally_mixed(), build(ChannelSpec.pauli_x(u))
    assert fe_kraus(rho, ch).value == pytest.approx(1 - u, abs=1e-12)
    assert fe_oracle(rho, ch).value == pytest.approx(1 - u, abs=1e-12)
    assert fe_closed_form(MIXED, ChannelSpec.pauli_x(u)).value == pytest.approx(1 - u, abs=1e-12)


def test_identity_channel_any_state(rng):
    ch = build(ChannelSpec.identity())
    for _ in range(20):
        rho = DensityOperator(random_density(rng, 2))
        assert fe_kraus(rho, ch).value == pytest.approx(1, abs=1e-12)


def test_kraus_matches_oracle_depolarizing():
    rho = qubit_state(QubitStateParams(0.7, 0.1 + 0.2j))
    ch = build(ChannelSpec.depolarizing(0.3))
    k, o = fe_kraus(rho, ch), fe_oracle(rho, ch)
    assert k.method is Method.KRAUS_SUM and o.method is Method.PURIFICATION_ORACLE
    assert abs(k.value - o.value) <= 1e-10
    # 1 + u(|c|^2 + (a-b)^2/4 - 3/4) with |c|^2 = 0.05, (a-b)^2 = 0.16
    assert k.value == pytest.approx(1 + 0.3 * (0.05 + 0.04 - 0.75), abs=1e-12)


@pytest.mark.parametrize("gamma", [0, 0.3, 1])
def test_ground_state_survives_damping(gamma):
    rho = qubit_state(QubitStateParams(1, 0))
    assert fe_oracle(rho, build(ChannelSpec.amplitude_damping(gamma))).value == pytest.approx(1)


def test_oracle_weyl_random(rng):
    for _ in range(200):
        spec = ChannelSpec.weyl(*random_weyl_probs(rng))
        rho = qubit_state(random_qubit_params(rng))
        ch = build(spec)
        assert abs(fe_oracle(rho, ch).value - fe_kraus(rho, ch).value) <= 1e-10


def test_closed_form_examples():
    plus = QubitStateParams(0.5, 0.5)
    for u in (0, 0.4, 1):
        assert fe_closed_form(plus, ChannelSpec.pauli_x(u)).value == pytest.approx(1, abs=1e-15)
    deph = cross_check(QubitStateParams(0.8, 0), ChannelSpec.dephasing(0.5))
    for v in (deph.closed, deph.kraus, deph.oracle):
        assert v == pytest.approx(0.68, abs=1e-12)
    for c in (0, 0.3, -0.45):
        assert fe_closed_form(QubitStateParams(0.5, c), ChannelSpec.werner_holevo()).value == 0
    for g in (0, 0.2, 0.9, 1):
        val = fe_closed_form(QubitStateParams(0, 0), ChannelSpec.amplitude_damping(g)).value
        assert val == pytest.approx(1 - g, abs=1e-15)


def test_cross_check_identity_and_werner_holevo():
    chk = cross_check(QubitStateParams(0.3, 0.1 + 0.2j), ChannelSpec.identity())
    assert (chk.closed, chk.kraus) == (1, pytest.approx(1))
    assert chk.oracle == pytest.approx(1, abs=1e-12)
    chk = cross_check(QubitStateParams(0.5, 0.3j), ChannelSpec.werner_holevo())
    for v in (chk.closed, chk.kraus, chk.oracle):
        assert v == pytest.approx(0.36, abs=1e-12)
    assert chk.max_spread <= 1e-10


def test_cross_check_pauli_grid():
    worst = 0.0
    for a in (0, 0.25, 0.5, 0.75, 1):
        r = np.sqrt(a * (1 - a))
        for frac in (0, 0.5, 1):
            for phase in np.linspace(0, 2 * np.pi, 5, endpoint=False):
                params = QubitStateParams(a, frac * r * np.exp(1j * phase) * (1 - 1e-15))
                for u in (0, 0.5, 1):
                    for make in (ChannelSpec.pauli_x, ChannelSpec.dephasing, ChannelSpec.depolarizing):
                        worst = max(worst, cross_check(params, make(u)).max_spread)
    assert worst <= 1e-10


def test_purification_independence(rng):
    ch = build(ChannelSpec.amplitude_damping(0.35))
    rho = qubit_state(QubitStateParams(0.6, 0.2 - 0.3j))
    base = fe_oracle(rho, ch).value
    pur = purify(rho)
    for _ in range(50):
        other = pur.with_reference_unitary(random_unitary(rng, 2))
        assert np.max(np.abs(other.reduced_state() - rho.matrix)) < 1e-10
        assert abs(fe_oracle(rho, ch, other).value - base) <= 1e-10


def test_kraus_remix_invariance(rng):
    rho = qubit_state(QubitStateParams(0.7, 0.1 + 0.2j))
    ch = build(ChannelSpec.depolarizing(0.6))
    base = fe_kraus(rho, ch).value
    for extra in (0, 2, 5):
        v = random_isometry(rng, len(ch) + extra, len(ch))
        assert abs(fe_kraus(rho, remix(ch, v)).value - base) <= 1e-10


def test_hermitian_kraus_specialization(rng):
    specs = [ChannelSpec.pauli_x(0.3), ChannelSpec.dephasing(0.6), ChannelSpec.depolarizing(0.8),
             ChannelSpec.werner_holevo()]
    for spec in specs:
        ch = build(spec)
        assert all(np.allclose(a, a.conj().T) for a in ch.kraus_ops)
        for _ in range(20):
            rho = qubit_state(random_qubit_params(rng))
            traces = [np.trace(rho.matrix @ a) for a in ch.kraus_ops]
            assert max(abs(t.imag) for t in traces) < 1e-15
            real_sum = sum(t.real ** 2 for t in traces)
            assert real_sum == pytest.approx(fe_kraus(rho, ch).value, abs=1e-14)


def test_weyl_phase_term_not_hermitian():
    ch = build(ChannelSpec.weyl(0.25, 0.25, 0.25, 0.25))
    xz = ch.kraus_ops[3]
    assert not np.allclose(xz, xz.conj().T)


def test_range_on_random_inputs(rng):
    for _ in range(100):
        params = random_qubit_params(rng, boundary=rng.random() < 0.3)
        g = rng.random()
        for spec in (ChannelSpec.amplitude_damping(g), ChannelSpec.weyl(*random_weyl_probs(rng))):
            chk = cross_check(params, spec)
            for v in (chk.closed, chk.kraus, chk.oracle):
                assert -1e-10 <= v <= 1 + 1e-10


def test_three_level_channel(rng):
    # dimension-generic paths on a qutrit dephasing channel
    rho = DensityOperator(random_density(rng, 3))
    p = 0.3
    ops = (np.sqrt(1 - p) * np.eye(3), np.sqrt(p) * np.diag([1, -1, 1]))
    ch = KrausChannel(ops)
    assert fe_kraus(rho, ch).value == pytest.approx(fe_oracle(rho, ch).value, abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ChannelError):
        fe_kraus(DensityOperator(np.eye(3) / 3), build(ChannelSpec.identity()))
    with pytest.raises(ChannelError):
        fe_oracle(DensityOperator(np.eye(3) / 3), build(ChannelSpec.identity()))


def test_result_range_enforced():
    with pytest.raises(FidelityError):
        FidelityResult(1.1, Method.KRAUS_SUM)
    with pytest.raises(FidelityError):
        fe_kraus(maximally_mixed(), KrausChannel((2 * I2,)))


@pytest.mark.parametrize("u", [0.2, 0.8])
def test_bell_case_depolarizing(u):
    # p = q = 1/2 reduces to I/2; the definitional value is 1 - 3u/4, not 1 - u/2
    val = fe_oracle(maximally_mixed(), build(ChannelSpec.depolarizing(u))).value
    assert val == pytest.approx(1 - 0.75 * u, abs=1e-10)
    assert abs(val - (1 - u / 2)) > 0.04
