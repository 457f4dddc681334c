"""Python binding smoke tests; run directly (no pytest dependency)."""

import math
import sys

import chemopp as cp


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol * max(1.0, abs(a), abs(b)), f"{a} != {b} (tol {tol})"


def test_reparametrize():
    p = cp.ChemostatParams(C=2, D=1, a=1, b=0.1, m=1, A=1, B=0.1, M=2)
    red = cp.reparametrize(p)
    approx(red.params.eps, 0.5)
    approx(red.params.beta, 0.1)
    approx(red.params.mu, 1.9)
    approx(red.params.lam, 10.0 / 19.0)
    approx(red.scales.tau_per_t, 1.0)


def test_h_decay():
    p = cp.ChemostatParams(C=2, D=1, a=1, b=0.1, m=1, A=1, B=0.1, M=2)
    traj = cp.integrate(p, cp.SystemKind.Chemostat3D, [1.0, 1.0, 1.0], 0.0, 20.0)
    h0 = cp.H_function(p, 1.0, 1.0, 1.0)
    for i in range(51):
        t = 20.0 * i / 50
        s = traj.interpolate(t)
        h = cp.H_function(p, s[0], s[1], s[2])
        assert abs(h - h0 * math.exp(-p.D * t)) <= 1e-8 * (1 + abs(h0))


def test_threshold_and_roots():
    p = cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.5)
    approx(cp.hopf_threshold(p), (-2 + math.sqrt(6)) / 4)
    roots = cp.xi_roots(p)
    assert roots.plus is not None and roots.minus is not None
    assert roots.minus < 0 < roots.plus
    approx(cp.hopf_threshold(cp.ReducedParams(eps=0, beta=2, mu=1, lam=0.5)), 0.25)


def test_equilibria():
    eqs = cp.find_equilibria(cp.ReducedParams(eps=1, beta=4, mu=1, lam=1.5))
    assert len(eqs) == 2
    assert eqs[0].classification == "saddle"
    assert eqs[1].classification == "stable"
    eqs = cp.find_equilibria(cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.05))
    assert len(eqs) == 3
    assert eqs[2].classification == "unstable"


def test_limit_cycle():
    p = cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.05)
    cfg = cp.IntegratorConfig.sweeping()
    cyc = cp.find_limit_cycle(p, cfg)
    assert cyc.found
    assert cyc.period > 0
    assert cyc.return_slope < 1
    assert cyc.xi_min < p.lam < cyc.xi_max
    no_cycle = cp.find_limit_cycle(cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.3), cfg)
    assert not no_cycle.found


def test_certificate_and_quartic():
    p = cp.ReducedParams(eps=1, beta=1.5, mu=1, lam=0.4)
    cert = cp.global_stability_certificate(p, run_trajectories=False)
    assert cert.pass_ and cert.theta == 0.0
    below = cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.05)
    assert not cp.global_stability_certificate(below, run_trajectories=False).pass_
    uniq = cp.uniqueness_check(below)
    assert uniq.pass_ and uniq.max_value <= 1e-12
    # Expanded and Taylor forms agree up to the eps*beta^2 factor.
    q15 = cp.kuang_quartic(below, 0.3)
    q16 = cp.kuang_quartic_taylor(below, 0.3)
    approx(q15, 1 * 16 * q16, 1e-12)


def test_invalid_parameters_raise():
    try:
        cp.ReducedParams(eps=-1, beta=1, mu=1, lam=1)
    except ValueError as e:
        assert "epsilon" in str(e)
    else:
        raise AssertionError("expected ValueError")


def test_sweep():
    spec = cp.SweepSpec(cp.ReducedParams(eps=1, beta=4, mu=1, lam=0.5),
                        cp.SweepParameter.Lambda, 0.05, 1.2, 3)
    spec.config = cp.IntegratorConfig.sweeping()
    records = cp.run_sweep(spec)
    kinds = [r.kind for r in records]
    assert kinds == ["limit-cycle", "interior-equilibrium", "boundary-equilibrium"], kinds


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} python smoke tests passed (chemopp {cp.__version__})")


if __name__ == "__main__":
    sys.exit(main())
