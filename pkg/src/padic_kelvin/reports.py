"""Verification suites and their machine-readable reports.

Every suite is a deterministic function of its ``SuiteConfig``; randomized
inputs come from a generator seeded with ``config.seed``.  A check is either
exact (passes iff its residual is the zero rational function in s) or
numeric (passes iff every residual is within its tolerance).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from . import __version__
from .errors import DomainError, PadicKelvinError, PrecisionError, ResourceError
from .extension import ext_abs, ext_mul, field_norm, get_context, iso_U, norm_exponent
from .families import chain_family, kelvin_family, random_padic, random_point, random_test_function, shell_points
from .kelvin import (
    RadialRegion,
    invert_point,
    kelvin_covariance_residual,
    kelvin_transform,
    reflect,
    verify_harmonicity,
    verify_kelvin_identity,
    verify_riesz_inversion_chain,
)
from .operators import dl_gamma_apply_at, riesz_apply_at, vt_apply_at, vt_image
from .oracle import relative_gap, shell_sum_oracle
from .padic import is_prime, valuation_of_rational
from .schwartz import TestFunction, make_point, points_agree
from .spectral import (
    Character,
    _as_complex,
    fourier_transform,
    inverse_fourier_transform,
    l2_norm_squared,
    make_eigenfunction,
    sobolev_inner,
    vt_spectral_at,
)
from .symbolic import SymbolicScalar, scalar_dl, to_number

SUITES = ("kelvin", "chain", "inverse", "reduction", "oracle", "fourier", "eigen", "harmonic", "arithmetic")
NEEDS_POTENTIAL_RANGE = ("kelvin", "chain", "harmonic", "inverse", "oracle")
ORACLE_TOL = 1e-12
SPECTRAL_TOL = 1e-9
EIGEN_TOL = 1e-10
SOBOLEV_TOL = 1e-12
STRUCTURE_SAMPLES = 100


@dataclass(frozen=True)
class SuiteConfig:
    p: int = 2
    n: int = 2
    alphas: tuple[float, ...] = ()
    precision: int = 32
    seed: int = 0

    def validate(self, suite: str) -> None:
        if suite not in SUITES:
            raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        if not is_prime(self.p):
            raise DomainError(f"p must be prime; got {self.p}")
        if not 2 <= self.n <= 8:
            raise DomainError(f"n must satisfy 2 <= n <= 8; got {self.n}")
        if self.precision < 8:
            raise DomainError(f"precision must be at least 8; got {self.precision}")
        for a in self.alphas:
            if a <= 0:
                raise DomainError(f"alpha must be positive; got {a}")
            if suite in NEEDS_POTENTIAL_RANGE and not 0 < a < self.n:
                raise DomainError(f"suite {suite!r} needs 0 < alpha < n; got {a}")

    def alphas_for(self, suite: str) -> tuple[float, ...]:
        if self.alphas:
            return tuple(self.alphas)
        if suite == "eigen" or suite == "harmonic":
            return (0.5, 1.0)
        return (0.5, 1.0, self.n - 0.25)


@dataclass
class CheckRecord:
    check_id: str
    inputs_digest: str
    kind: str  # "exact" or "numeric"
    symbolic_residual: str | None = None
    numeric_residuals: dict[str, float] = field(default_factory=dict)
    tolerance: float | None = None
    oracle_agreement: bool | None = None
    passed: bool = False
    error: dict | None = None

    def settle(self) -> CheckRecord:
        if self.error is not None:
            self.passed = False
        elif self.kind == "exact":
            self.passed = self.symbolic_residual == "0"
        else:
            self.passed = all(v <= self.tolerance for v in self.numeric_residuals.values())
        return self


@dataclass
class VerificationReport:
    suite: str
    header: dict
    checks: list[CheckRecord] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        failed = sum(1 for c in self.checks if not c.passed and c.error is None)
        errored = sum(1 for c in self.checks if c.error is not None)
        return {
            "total": len(self.checks),
            "passed": sum(1 for c in self.checks if c.passed),
            "failed": failed,
            "errored": errored,
        }

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_status(self) -> int:
        errors = {c.error["type"] for c in self.checks if c.error is not None}
        if "ResourceError" in errors:
            return EXIT_RESOURCE
        if errors & {"PrecisionError", "DivergenceError"}:
            return EXIT_NUMERIC
        return EXIT_OK if self.ok else EXIT_FAILED

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "schema": "padic-kelvin/verification-report/1",
            "suite": self.suite,
            "header": self.header,
            "checks": [asdict(c) for c in self.checks],
            "summary": self.summary,
        }
        if timings:
            out["timings"] = self.timings
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check_id", "kind", "passed", "symbolic_residual", "numeric_residuals", "tolerance", "oracle_agreement", "error", "inputs_digest"])
        for c in self.checks:
            w.writerow([
                c.check_id,
                c.kind,
                c.passed,
                "" if c.symbolic_residual is None else c.symbolic_residual,
                ";".join(f"{k}={v:.3e}" for k, v in c.numeric_residuals.items()),
                "" if c.tolerance is None else c.tolerance,
                "" if c.oracle_agreement is None else c.oracle_agreement,
                "" if c.error is None else f"{c.error['type']}: {c.error['message']}",
                c.inputs_digest,
            ])
        return buf.getvalue()

    def to_text(self) -> str:
        h = self.header
        lines = [
            f"suite {self.suite}: {h['modulus']}  precision={h['precision']}  seed={h['seed']}",
            f"alpha samples: {', '.join(map(str, h['alphas']))}",
        ]
        for note_key, note in sorted(h.get("notes", {}).items()):
            lines.append(f"note {note_key}: {note}")
        width = max((len(c.check_id) for c in self.checks), default=8)
        for c in self.checks:
            status = "PASS" if c.passed else ("ERROR" if c.error else "FAIL")
            if c.error:
                detail = f"{c.error['type']}: {c.error['message']}"
            elif c.kind == "exact":
                detail = f"residual {c.symbolic_residual}"
            else:
                worst = max(c.numeric_residuals.values(), default=0.0)
                detail = f"max residual {worst:.3e} (tol {c.tolerance:g})"
            if c.oracle_agreement is False:
                detail += "  [oracle disagrees]"
            lines.append(f"{status:5}  {c.check_id:<{width}}  {detail}")
        s = self.summary
        lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, {s['errored']} errored")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise DomainError(f"unknown format {fmt!r}")


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_NUMERIC = 4


# ---------------------------------------------------------------------------
# helpers


def digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(json.dumps(part, sort_keys=True, default=str).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


def _fn_json(u) -> dict:
    return u.to_json() if isinstance(u, TestFunction) else {"repr": repr(u)}


def _pt_json(x) -> list[str]:
    return [str(c) for c in x]


def _exact_record(check_id: str, inputs, residual: SymbolicScalar, alphas, p: int) -> CheckRecord:
    rec = CheckRecord(check_id, digest(*inputs), "exact", symbolic_residual=str(residual))
    rec.numeric_residuals = {f"{a:g}": abs(complex(to_number(residual, a, p))) for a in alphas}
    return rec.settle()


def _numeric_record(check_id: str, inputs, residuals: dict, tol: float) -> CheckRecord:
    rec = CheckRecord(check_id, digest(*inputs), "numeric", numeric_residuals=residuals, tolerance=tol)
    return rec.settle()


def _guarded(check_id: str, inputs, body: Callable[[], CheckRecord]) -> CheckRecord:
    try:
        return body()
    except PadicKelvinError as exc:
        rec = CheckRecord(check_id, digest(*inputs), "exact")
        rec.error = {"type": type(exc).__name__, "message": str(exc)}
        return rec.settle()


def _oracle_gaps(pairs, alphas, p: int, kind: str) -> dict[str, float]:
    """max relative gap per alpha between closed forms and the shell oracle."""
    gaps = {}
    for a in alphas:
        gaps[f"{a:g}"] = max(
            relative_gap(to_number(value, a, p), shell_sum_oracle(func, x, a, kind=kind))
            for func, x, value in pairs
        )
    return gaps


def _attach_oracle(rec: CheckRecord, gaps: dict[str, float]) -> CheckRecord:
    rec.oracle_agreement = all(g <= ORACLE_TOL for g in gaps.values())
    return rec


# ---------------------------------------------------------------------------
# suites


def suite_kelvin(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    points = shell_points(p, n, cfg.seed, precision=cfg.precision)
    for name, u in kelvin_family(p, n):
        ku = kelvin_transform(u)
        for i, x in enumerate(points):
            inputs = (_fn_json(u), _pt_json(x))

            def stated():
                rec = _exact_record(f"kelvin/same-point/{name}/x{i}", inputs, verify_kelvin_identity(u, x), alphas, p)
                pairs = [(u, x, vt_apply_at(u, x)), (ku, x, vt_apply_at(ku, x))]
                return _attach_oracle(rec, _oracle_gaps(pairs, alphas, p, "vt"))

            def covariant():
                rec = _exact_record(f"kelvin/inverted-point/{name}/x{i}", inputs, kelvin_covariance_residual(u, x), alphas, p)
                jx = invert_point(x)
                return _attach_oracle(rec, _oracle_gaps([(u, jx, vt_apply_at(u, jx))], alphas, p, "vt"))

            yield _guarded(f"kelvin/same-point/{name}/x{i}", inputs, stated)
            yield _guarded(f"kelvin/inverted-point/{name}/x{i}", inputs, covariant)


def suite_inverse(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    points = shell_points(p, n, cfg.seed, precision=cfg.precision)
    for name, u in kelvin_family(p, n):
        du = vt_image(u)
        for i, x in enumerate(points):
            cid = f"inverse/{name}/x{i}"
            inputs = (_fn_json(u), _pt_json(x))

            def body():
                value = riesz_apply_at(du, x)
                rec = _exact_record(cid, inputs, value - u.evaluate(x), alphas, p)
                return _attach_oracle(rec, _oracle_gaps([(du, x, value)], alphas, p, "riesz"))

            yield _guarded(cid, inputs, body)


def suite_chain(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    points = shell_points(p, n, cfg.seed, per_shell=1, precision=cfg.precision)
    for name, f in chain_family(p, n):
        fstar = reflect(f)
        for i, x in enumerate(points):
            cid = f"chain/{name}/x{i}"
            inputs = (_fn_json(f), _pt_json(x))

            def body():
                rec = _exact_record(cid, inputs, verify_riesz_inversion_chain(f, x), alphas, p)
                jx = invert_point(x)
                return _attach_oracle(rec, _oracle_gaps([(fstar, jx, riesz_apply_at(fstar, jx))], alphas, p, "riesz"))

            yield _guarded(cid, inputs, body)


def suite_reduction(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    ctx = get_context(p, n)
    points = shell_points(p, n, cfg.seed, precision=cfg.precision)
    for name, u in kelvin_family(p, n):
        for i, x in enumerate(points):
            cid = f"reduction/{name}/x{i}"
            inputs = (_fn_json(u), _pt_json(x))

            def body():
                value = vt_apply_at(u, x)
                rec = _exact_record(cid, inputs, dl_gamma_apply_at(u, iso_U(ctx, x)) - value, alphas, p)
                return _attach_oracle(rec, _oracle_gaps([(u, x, value)], alphas, p, "vt"))

            yield _guarded(cid, inputs, body)


def degree_free_gap(cfg: SuiteConfig, alphas) -> float:
    """Largest gap between the degree-free normalization and the integral operator."""
    ctx = get_context(cfg.p, cfg.n)
    worst = 0.0
    for _, u in kelvin_family(cfg.p, cfg.n):
        for x in shell_points(cfg.p, cfg.n, cfg.seed, per_shell=1, precision=cfg.precision):
            for a in alphas:
                lhs = dl_gamma_apply_at(u, iso_U(ctx, x), a, normalization="without_degree")
                worst = max(worst, relative_gap(lhs, vt_apply_at(u, x, a)))
    return worst


def suite_oracle(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    """The closed forms against brute-force shell sums, one record per atom type."""
    p, n = cfg.p, cfg.n
    points = shell_points(p, n, cfg.seed, per_shell=1, precision=cfg.precision)
    for name, u in kelvin_family(p, n):
        forms = [
            ("vt-ball", u, "vt"),
            ("vt-kelvin-tail", kelvin_transform(u), "vt"),
            ("riesz-tail", vt_image(u), "riesz"),
        ]
        for label, func, kind in forms:
            cid = f"oracle/{label}/{name}"
            inputs = (_fn_json(u), label)
            apply = vt_apply_at if kind == "vt" else riesz_apply_at

            def body():
                pairs = [(func, x, apply(func, x)) for x in points]
                return _numeric_record(cid, inputs, _oracle_gaps(pairs, alphas, p, kind), ORACLE_TOL)

            yield _guarded(cid, inputs, body)


def suite_fourier(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    rng = random.Random(f"fourier:{cfg.seed}:{p}:{n}")
    funcs = [random_test_function(rng, p, n) for _ in range(10)]
    points = [random_point(rng, p, n, k, cfg.precision) for k in range(-2, 3) for _ in range(2)]
    for j, phi in enumerate(funcs):
        cid = f"fourier/spectral-vs-integral/f{j}"
        inputs = (_fn_json(phi), [_pt_json(x) for x in points])

        def body():
            gaps = {}
            ft = fourier_transform(phi)
            for a in alphas:
                gaps[f"{a:g}"] = max(abs(vt_spectral_at(phi, x, a, ft) - vt_apply_at(phi, x, a)) for x in points)
            return _numeric_record(cid, inputs, gaps, SPECTRAL_TOL)

        yield _guarded(cid, inputs, body)

    unit = TestFunction.unit_ball(p, n)
    yield _guarded("fourier/unit-ball-fixed", (p, n), lambda: _numeric_record(
        "fourier/unit-ball-fixed", (p, n),
        {"sup": _sup_gap(fourier_transform(unit), unit, points)}, SOBOLEV_TOL))
    for ell in range(6):
        cid = f"fourier/sobolev-unit/l{ell}"
        yield _guarded(cid, (p, n, ell), lambda ell=ell, cid=cid: _numeric_record(
            cid, (p, n, ell), {"abs": abs(sobolev_inner(unit, unit, ell) - 1)}, SOBOLEV_TOL))
    prng = random.Random(f"plancherel:{cfg.seed}:{p}:{n}")
    for j in range(20):
        phi = random_test_function(prng, p, n, complex_coeffs=True)
        cid = f"fourier/plancherel/f{j}"

        def plancherel(phi=phi, cid=cid):
            lhs = l2_norm_squared(phi)
            rhs = sobolev_inner(phi, phi, 0).real
            return _numeric_record(cid, (_fn_json(phi),), {"rel": abs(lhs - rhs) / max(1.0, lhs)}, SOBOLEV_TOL)

        yield _guarded(cid, (_fn_json(phi),), plancherel)
        if j < 10:
            rid = f"fourier/round-trip/f{j}"
            yield _guarded(rid, (_fn_json(phi),), lambda phi=phi, rid=rid: _numeric_record(
                rid, (_fn_json(phi),),
                {"sup": _sup_gap(inverse_fourier_transform(fourier_transform(phi)), phi, points)}, SOBOLEV_TOL))


def _sup_gap(f: TestFunction, g: TestFunction, points) -> float:
    """max |f - g| on canonical-ball representatives plus the given points."""
    probe = list(points)
    for h in (f, g):
        for b, _ in h.canonicalize().terms:
            probe.append(make_point(b.p, b.center, 40))
    return max((abs(_as_complex(f.evaluate(x)) - _as_complex(g.evaluate(x))) for x in probe), default=0.0)


def _eigen_data(cfg: SuiteConfig):
    p, n = cfg.p, cfg.n
    u0 = [Fraction(1, p)] + [Fraction(0)] * (n - 1)
    f, eig = make_eigenfunction(u0, p)
    return u0, f, eig


def suite_eigen(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    u0, f, eig = _eigen_data(cfg)
    rng = random.Random(f"eigen:{cfg.seed}:{p}:{n}")
    points = [random_point(rng, p, n, k, cfg.precision) for k in range(-2, 2) for _ in range(5)]
    inputs = ([str(c) for c in u0],)
    ft = fourier_transform(f)
    for i, x in enumerate(points):
        cid = f"eigen/relation/x{i}"

        def body():
            res = {}
            for a in alphas:
                target = to_number(eig, a, p) * f.evaluate(x)
                res[f"{a:g}"] = max(abs(vt_spectral_at(f, x, a, ft) - target), abs(vt_apply_at(f, x, a) - target))
            return _numeric_record(cid, inputs + (_pt_json(x),), res, EIGEN_TOL)

        yield _guarded(cid, inputs, body)
    yield _numeric_record("eigen/mean-zero", inputs, {"abs": abs(complex(f.integrate()))}, EIGEN_TOL)


def suite_harmonic(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    """D(K f) vanishes on the image of {||x|| > 1}, where D f = 0."""
    p, n = cfg.p, cfg.n
    u0, f, _ = _eigen_data(cfg)
    region = RadialRegion(lo=1)
    rng = random.Random(f"harmonic:{cfg.seed}:{p}:{n}")
    points = [random_point(rng, p, n, -1 - (i % 3), cfg.precision) for i in range(10)]
    for a in alphas:
        cid = f"harmonic/kelvin-of-eigenfunction/alpha{a:g}"
        inputs = ([str(c) for c in u0], a, [_pt_json(x) for x in points])

        def body(a=a, cid=cid):
            rep = verify_harmonicity(f, region, points, a, tol=EIGEN_TOL)
            return _numeric_record(cid, inputs, {f"{a:g}": rep.max_abs}, EIGEN_TOL)

        yield _guarded(cid, inputs, body)


def suite_arithmetic(cfg: SuiteConfig, alphas) -> Iterator[CheckRecord]:
    p, n = cfg.p, cfg.n
    ctx = get_context(p, n)
    rng = random.Random(f"arith:{cfg.seed}:{p}:{n}")
    prec = cfg.precision

    def rand_padic():
        return random_padic(rng, p, rng.randrange(-4, 5), prec)

    def rand_vec():
        return random_point(rng, p, n, rng.randrange(-3, 4), prec)

    def count(check):
        return sum(0 if check() else 1 for _ in range(STRUCTURE_SAMPLES))

    def ultrametric():
        x, y = rand_padic(), rand_padic()
        if rng.random() < 0.3:
            y = -x + random_padic(rng, p, x.valuation + rng.randrange(1, 6), prec)
        s, a, b = (x + y).norm(), x.norm(), y.norm()
        return s <= max(a, b) and (a == b or s == max(a, b))

    def multiplicative():
        x, y = rand_padic(), rand_padic()
        return (x * y).norm() == x.norm() * y.norm()

    def eq28():
        a = iso_U(ctx, rand_vec())
        big, small = ext_abs(a)
        nv = valuation_of_rational(field_norm(a), p)
        return big == small**n and big == Fraction(p) ** (-nv)

    def l_multiplicative():
        a, b = iso_U(ctx, rand_vec()), iso_U(ctx, rand_vec())
        return ext_abs(ext_mul(a, b))[0] == ext_abs(a)[0] * ext_abs(b)[0]

    def involution():
        x = rand_vec()
        back = invert_point(invert_point(x))
        return points_agree(back, x, prec - 2)

    def reciprocity():
        x = rand_vec()
        return norm_exponent(invert_point(x)) + norm_exponent(x) == 0

    def character():
        z = random_padic(rng, p, rng.randrange(0, 6), prec)
        return Character(p)(z) == 1

    checks = [
        ("ultrametric", ultrametric),
        ("multiplicative", multiplicative),
        ("norm-identity", eq28),
        ("l-multiplicative", l_multiplicative),
        ("involution", involution),
        ("norm-reciprocity", reciprocity),
        ("rank-zero-character", character),
    ]
    for name, check in checks:
        cid = f"arithmetic/{name}"
        inputs = (p, n, cfg.seed, name, STRUCTURE_SAMPLES)
        yield _guarded(cid, inputs, lambda check=check, cid=cid, inputs=inputs: _numeric_record(
            cid, inputs, {"failures": float(count(check))}, 0.0))


_SUITE_FUNCS = {
    "kelvin": suite_kelvin,
    "chain": suite_chain,
    "inverse": suite_inverse,
    "reduction": suite_reduction,
    "oracle": suite_oracle,
    "fourier": suite_fourier,
    "eigen": suite_eigen,
    "harmonic": suite_harmonic,
    "arithmetic": suite_arithmetic,
}


def run_suite(suite: str, config: SuiteConfig | None = None) -> VerificationReport:
    """Run one suite; raises DomainError on an invalid configuration."""
    config = config or SuiteConfig()
    config.validate(suite)
    alphas = config.alphas_for(suite)
    ctx = get_context(config.p, config.n)
    header = {
        "p": config.p,
        "n": config.n,
        "modulus": ctx.describe(),
        "precision": config.precision,
        "alphas": list(alphas),
        "seed": config.seed,
        "version": __version__,
        "character": "exp(2*pi*i*{x}_p), pairing x.xi = sum x_j xi_j",
        "notes": {},
    }
    if suite == "reduction":
        header["notes"]["normalization"] = f"with_degree: {scalar_dl(config.n, config.p)}"
        header["notes"]["degree_free_max_gap"] = f"{degree_free_gap(config, alphas):.6e}"
    if suite == "kelvin":
        header["notes"]["forms"] = (
            "same-point: D u(x) vs ||x||^(alpha+n) D(Ku)(x); "
            "inverted-point: D u(Jx) vs ||x||^(alpha+n) D(Ku)(x)"
        )
    report = VerificationReport(suite, header)
    start = time.perf_counter()
    try:
        for rec in _SUITE_FUNCS[suite](config, alphas):
            report.checks.append(rec)
    except ResourceError as exc:
        report.checks.append(CheckRecord(f"{suite}/aborted", digest(suite), "exact", error={"type": "ResourceError", "message": str(exc)}).settle())
    except PrecisionError as exc:
        report.checks.append(CheckRecord(f"{suite}/aborted", digest(suite), "exact", error={"type": "PrecisionError", "message": str(exc)}).settle())
    report.timings = {"wall_seconds": round(time.perf_counter() - start, 6)}
    return report
