#!/usr/bin/env python3
"""High-precision reference values frozen into the C++ test suites.

Each value is computed by a route independent of the C++ engine (contour
rotation, closed forms, mpmath special functions or mpmath.quadosc).
Run: python3 scripts/oracles/oracles.py
"""
import mpmath as mp

mp.mp.dps = 40


def show(name, z):
    z = mp.mpc(z)
    print(f"{name:48s} re={mp.nstr(z.real, 20):>28s} im={mp.nstr(z.imag, 20):>28s}")


def tail_exp_ix_pow(delta):
    # int_1^inf e^{ix} x^delta dx via rotation x = 1 + i t
    f = lambda t: mp.exp(1j * (1 + 1j * t)) * (1 + 1j * t) ** delta * 1j
    return mp.quad(f, [0, mp.inf])


def one_sided_chirp(alpha, nu, s):
    # int_0^inf x^alpha e^{i(x^nu - s x)} dx, rotate x = r e^{i pi/(2 nu)}
    w = mp.exp(1j * mp.pi / (2 * nu))
    f = lambda r: (r * w) ** alpha * mp.exp(1j * ((r * w) ** nu - s * r * w)) * w
    return mp.quad(f, [0, 1, 2, 4, mp.inf])


def stationary(alpha, nu, s):
    x0 = nu ** (-1 / (nu - 1))
    phi = x0 ** nu - x0
    return (mp.sqrt(2 * mp.pi / (nu * (nu - 1))) * mp.exp(1j * mp.pi / 4)
            * x0 ** (alpha - (nu - 2) / 2.0)
            * mp.exp(1j * phi * s ** (nu / (nu - 1)))
            * s ** ((2 * alpha + 2 - nu) / (2 * (nu - 1))))


if __name__ == "__main__":
    show("int_1^inf e^{ix} x^-1/2", tail_exp_ix_pow(-0.5))
    show("int_0^1 e^{i/x} x^-1/2 = int_1^inf e^{iu}u^-1.5", tail_exp_ix_pow(-1.5))
    # gamma=0.5, delta=-1.2: u=1/x -> int_1^inf e^{i u^0.5} u^{-0.8} du ; v = u^0.5
    # -> 2 int_1^inf e^{iv} v^{-0.6} dv
    show("int_0^1 e^{ix^-0.5} x^-1.2", 2 * tail_exp_ix_pow(-0.6))
    # gamma=3, delta=1: int_1^inf e^{ix^3} x dx ; v=x^3 -> (1/3) int_1^inf e^{iv} v^{-1/3}
    show("int_1^inf e^{ix^3} x", tail_exp_ix_pow(-1.0 / 3) / 3)
    show("2 Si(pi)", 2 * mp.si(mp.pi))
    for s in [1, 4]:
        show(f"ex1a fhat({s}) = -2i int_0^inf x^-1/2 sin(sx)", -2j * mp.sqrt(mp.pi / (2 * s)))
    for (a, n) in [(1.5, 3), (1.0, 3)]:
        for s in [1, 5, 10, 20, 40]:
            q = one_sided_chirp(a, n, s)
            st = stationary(a, n, s)
            show(f"chirp a={a} nu={n} s={s}", q)
            print(f"{'':48s} |q|={mp.nstr(abs(q), 12)} |asym|={mp.nstr(abs(st), 12)} "
                  f"relerr={mp.nstr(abs(abs(st) - abs(q)) / abs(q), 6)}")
    show("one-sided chirp a=0 nu=2 s=4", one_sided_chirp(0, 2, 4))
    # product bound example: int_0^{2pi} sin(x) e^{-x}
    show("int_0^2pi sin e^-x", (1 - mp.exp(-2 * mp.pi)) / 2)
    show("2(1-e^-1)", 2 * (1 - mp.exp(-1)))
    show("sqrt(pi/2)", mp.sqrt(mp.pi / 2))
    # interval average for x/(x^2+1) on [1,2]
    show("-i pi (e^-1 - e^-2)", -1j * mp.pi * (mp.exp(-1) - mp.exp(-2)))
    # lacunary two-term
    show("lacunary two-term s=3", 1j * (mp.log(0.5) + 0.5 * mp.log(0.2)))
    # conv (RationalOdd * Gauss) transform at s=1
    show("c4 s=1", -1j * mp.pi * mp.exp(-1) * mp.sqrt(mp.pi) * mp.exp(-0.25))
    # (x/(x^2+1)) * e^{-x^2} at x=1: int (x-t)/((x-t)^2+1) e^{-t^2} dt
    g = lambda t: (1 - t) / ((1 - t) ** 2 + 1) * mp.exp(-t ** 2)
    show("conv ex1d*gauss at x=1", mp.quad(g, [-mp.inf, 0, 1, mp.inf]))
    # Parseval: int k(x) sqrt(pi) e^{-x^2/4} dx vs int -i pi sgn(s) e^{-|s|} e^{-s^2} = 0
    show("Parseval ex1d/gauss", 0)
    # Fubini fixture: x/(x^2+1) against e^{-ixy} e^{-(y-1)^2}, y over R.
    # dx inside gives -i pi sgn(y) e^{-|y|}
    show("fubini rational-odd chirped gauss",
         mp.quad(lambda y: -1j * mp.pi * mp.sign(y) * mp.exp(-abs(y)) * mp.exp(-(y - 1) ** 2), [-mp.inf, 0, mp.inf]))
    # chi[0,1] against cos(xy) e^{-|y|}: int_0^1 2/(1+x^2) = pi/2
    show("fubini indicator cos abel", mp.pi / 2)
    show("ex1b fhat(s), s=1", mp.sqrt(mp.pi) * mp.exp(1j * (mp.pi - 1) / 4))
    show("ex1c fhat(3) = i log(1/2)", 1j * mp.log(0.5))
    show("ex1d fhat(1)", -1j * mp.pi * mp.exp(-1))
