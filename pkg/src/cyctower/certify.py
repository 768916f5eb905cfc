"""Per-prime certificates of point and rank stability in the cyclotomic Z_p-tower.

For a genus-2 curve X/Q with Jacobian A of rank 0, X(Q_cyc) = X(Q) at every
prime p >= 5 of good ordinary, non-anomalous reduction with
A(Q)[p] = 0, p > prod_{l in Sigma} #A(Q(A[l]))[l^oo], p prime to #Sha and
prime to the Tamagawa product, given big image and X(Q) nonempty.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import comb, prod
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadReductionError,
    InapplicableError,
    InconsistentInputError,
    InternalInconsistencyError,
    ValidationError,
)
from .finite_field import is_prime
from .hyperelliptic import CurveModel, LocalData, find_rational_point, local_data

log = logging.getLogger(__name__)

PROVED = "proved"
COMPUTED_MULTIPLE = "computed-multiple"
ANALYTIC = "analytic-conjectural"
UNKNOWN = "unknown"

TORSION_PROVENANCES = (PROVED, COMPUTED_MULTIPLE, UNKNOWN)
SHA_PROVENANCES = (PROVED, ANALYTIC, UNKNOWN)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    CONDITIONAL = "conditional"


class Conclusion(str, Enum):
    POINTS_STABLE = "POINTS_STABLE"
    RANK_STABLE = "RANK_STABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ExceptionalPrimeEntry:
    """A prime l whose mod-l image misses Sp_4(F_l), with #A(Q(A[l]))[l^oo]."""

    ell: int
    torsion_over_division_field: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValidationError(f"exceptional prime {self.ell} is not prime")
        n = self.torsion_over_division_field
        if n < 1 or p_part(n, self.ell) != n:
            raise ValidationError(f"torsion over Q(A[{self.ell}]) must be a power of {self.ell}, got {n}")


@dataclass(frozen=True)
class ArithmeticInvariants:
    rank: int | None = None
    torsion_order: int | None = None
    torsion_provenance: str = UNKNOWN
    sha_order: int | None = None
    sha_provenance: str = UNKNOWN
    tamagawa: Mapping[int, int] = field(default_factory=dict)
    exceptional_primes: tuple[ExceptionalPrimeEntry, ...] | None = None
    n0_override: int | None = None

    def __post_init__(self):
        if self.rank is not None and self.rank < 0:
            raise ValidationError("rank must be nonnegative")
        if self.torsion_order is not None and self.torsion_order < 1:
            raise ValidationError("torsion_order must be positive")
        if self.sha_order is not None and self.sha_order < 1:
            raise ValidationError("sha_order must be positive")
        if self.torsion_provenance not in TORSION_PROVENANCES:
            raise ValidationError(f"torsion_provenance must be one of {TORSION_PROVENANCES}")
        if self.sha_provenance not in SHA_PROVENANCES:
            raise ValidationError(f"sha_provenance must be one of {SHA_PROVENANCES}")
        for v, c in self.tamagawa.items():
            if not is_prime(v) or c < 1:
                raise ValidationError(f"bad Tamagawa entry {v}: {c}")
        if self.n0_override is not None and self.n0_override < 0:
            raise ValidationError("n0_override must be nonnegative")
        if self.exceptional_primes is not None:
            object.__setattr__(self, "exceptional_primes", tuple(self.exceptional_primes))
            ells = [e.ell for e in self.exceptional_primes]
            if len(set(ells)) != len(ells):
                raise ValidationError("duplicate exceptional prime")

    @property
    def tamagawa_product(self) -> int:
        return prod(self.tamagawa.values())


@dataclass(frozen=True)
class Check:
    name: str
    status: Status
    witness: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status.value, "witness": self.witness}


@dataclass(frozen=True)
class Certificate:
    p: int
    checks: tuple[Check, ...]
    conclusion: Conclusion
    conditionality: tuple[str, ...] = ()

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "checks": [c.to_json() for c in self.checks],
            "conclusion": self.conclusion.value,
            "conditionality": list(self.conditionality),
        }


# -- arithmetic helpers --------------------------------------------------------


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_part(n: int, p: int) -> int:
    return p ** valuation(n, p)


def _log_of_power(x: int, p: int, what: str) -> int:
    if x < 1 or p_part(x, p) != x:
        raise ValidationError(f"{what} = {x} is not a power of {p}")
    return valuation(x, p)


def euler_char_valuation(
    p: int,
    sha_p_part: int,
    tamagawa_p_parts: Sequence[int],
    reduced_orders_p_parts: Sequence[int],
    rational_torsion_p_part: int,
) -> int:
    """v_p(f(0)) for the characteristic element of the Selmer group over Q_cyc.

    f(0) ~ #Sha[p^oo] * prod c_v^(p) * (prod_{v|p} #A~(F_v)[p^oo])^2 / #A(Q)[p^oo]^2.
    """
    s = _log_of_power(sha_p_part, p, "Sha p-part")
    c = sum(_log_of_power(x, p, "Tamagawa p-part") for x in tamagawa_p_parts)
    reds = [_log_of_power(x, p, "reduced order p-part") for x in reduced_orders_p_parts]
    t = _log_of_power(rational_torsion_p_part, p, "torsion p-part")
    # A(Q)[p^oo] injects into every A~(F_v) for v | p since p is odd
    if any(r < t for r in reds):
        raise InconsistentInputError("rational p-torsion larger than the reduction's p-part")
    v = s + c + 2 * sum(reds) - 2 * t
    if v < 0:
        raise InconsistentInputError(f"negative Euler characteristic valuation {v}")
    return v


@dataclass(frozen=True)
class Verdict:
    status: str  # "holds" | "fails" | "conditional"
    reasons: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status in ("holds", "conditional")


def lambda_zero_criterion(p: int, local: LocalData, inv: ArithmeticInvariants) -> Verdict:
    """Sufficient condition for lambda(A/Q_cyc) = 0, hence n0(p) = 0, at rank 0."""
    if inv.rank is None:
        raise InapplicableError("rank unknown; the lambda = 0 criterion needs rank 0")
    if inv.rank > 0:
        raise InapplicableError(f"rank {inv.rank} > 0; the lambda = 0 criterion needs rank 0")
    if not local.good_reduction:
        raise InapplicableError(f"no good reduction at p={p}")
    if inv.torsion_order is not None and inv.torsion_provenance == PROVED:
        if local.jacobian_order % p_part(inv.torsion_order, p):
            raise InconsistentInputError(
                f"p-part of #A(Q)_tors={inv.torsion_order} does not divide #A(F_p)={local.jacobian_order}"
            )
    fails, conds = [], []
    if not local.ordinary:
        fails.append("not ordinary")
    if local.anomalous:
        fails.append("anomalous")
    if inv.sha_order is None:
        fails.append("Sha order unknown")
    elif inv.sha_order % p == 0:
        fails.append("p divides #Sha")
    elif inv.sha_provenance != PROVED:
        conds.append(f"Sha order is {inv.sha_provenance}")
    if inv.tamagawa_product % p == 0:
        fails.append("p divides the Tamagawa product")
    if fails:
        return Verdict("fails", tuple(fails))
    if conds:
        return Verdict("conditional", tuple(conds))
    return Verdict("holds")


def alpha_bound(inv: ArithmeticInvariants) -> int:
    """prod over exceptional l of #A(Q(A[l]))[l^oo]; bounds #A(Q_cyc)_tors when A(Q)[p] = 0."""
    if inv.exceptional_primes is None:
        raise InapplicableError("no exceptional-prime data supplied")
    return prod(e.torsion_over_division_field for e in inv.exceptional_primes)


def m0_bound(n0: int, alpha: int, p: int) -> int:
    """n0 + floor(log_p alpha), exact."""
    if alpha < 1:
        raise ValidationError("alpha must be >= 1")
    k, power = 0, p
    while power <= alpha:
        k += 1
        power *= p
    return n0 + k


def exceptional_genera(limit: int) -> set[int]:
    """Genera <= limit excluded by the Serre-Pink big-image theorem.

    {(2n)^k / 2 : n > 0, k >= 3 odd} U {binom(2n, n) / 2 : n >= 3 odd}.
    """
    out = set()
    n = 1
    while (2 * n) ** 3 // 2 <= limit:
        k = 3
        while (2 * n) ** k // 2 <= limit:
            out.add((2 * n) ** k // 2)
            k += 2
        n += 1
    n = 3
    while comb(2 * n, n) // 2 <= limit:
        out.add(comb(2 * n, n) // 2)
        n += 2
    return out


def _iroot(x: int, k: int) -> int:
    r = round(x ** (1.0 / k))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def is_genus_exceptional(g: int) -> bool:
    if g < 1:
        raise ValidationError("genus must be >= 1")
    two_g = 2 * g
    k = 3
    while 2**k <= two_g:
        m = _iroot(two_g, k)
        if m**k == two_g and m % 2 == 0:
            return True
        k += 2
    n = 3
    while comb(2 * n, n) <= two_g:
        if comb(2 * n, n) == two_g:
            return True
        n += 2
    return False


# -- certificates --------------------------------------------------------------

CHECK_NAMES = (
    "prime_at_least_5",
    "genus_supported",
    "good_reduction",
    "ordinary",
    "non_anomalous",
    "torsion_prime_to_p",
    "p_exceeds_alpha_bound",
    "sha_prime_to_p",
    "tamagawa_prime_to_p",
    "rank_zero",
    "big_image_genus",
    "rational_point",
    "lambda_zero",
    "m0_bound",
)

MAIN_CONDITIONS = (
    "rank_zero",
    "big_image_genus",
    "rational_point",
    "good_reduction",
    "ordinary",
    "non_anomalous",
    "torsion_prime_to_p",
    "p_exceeds_alpha_bound",
    "sha_prime_to_p",
    "tamagawa_prime_to_p",
)

_OK = (Status.PASS, Status.CONDITIONAL)

COND_SHA = "Sha(A/Q) order from {} data"
COND_BIG_IMAGE = "big image: End(A/Qbar) = Z taken as given (Serre-Pink)"
COND_N0 = "n0 = 0 from user-supplied n0_override"


def _skipped_certificate(p: int, done: list[Check], reason: str) -> Certificate:
    seen = {c.name for c in done}
    checks = done + [Check(n, Status.SKIPPED, reason) for n in CHECK_NAMES if n not in seen]
    return Certificate(p, tuple(checks), Conclusion.INCONCLUSIVE)


def certify_prime(
    curve: CurveModel,
    inv: ArithmeticInvariants,
    p: int,
    local: LocalData | None = None,
) -> Certificate:
    """Evaluate every stability condition at p; failures do not stop evaluation."""
    checks: list[Check] = []
    if p < 5:
        checks.append(Check("prime_at_least_5", Status.FAIL, p))
        return _skipped_certificate(p, checks, "p < 5")
    checks.append(Check("prime_at_least_5", Status.PASS, p))
    if curve.genus != 2:
        checks.append(Check("genus_supported", Status.FAIL, curve.genus))
        return _skipped_certificate(p, checks, "unsupported genus")
    checks.append(Check("genus_supported", Status.PASS, curve.genus))

    if local is None:
        local = local_data(curve, p)
    if not local.good_reduction:
        checks.append(Check("good_reduction", Status.SKIPPED, f"bad model reduction: {local.reason}"))
        return _skipped_certificate(p, checks, "bad model reduction")
    checks.append(Check("good_reduction", Status.PASS, {"N1": local.N1, "N2": local.N2}))

    def flag(ok: bool) -> Status:
        return Status.PASS if ok else Status.FAIL

    checks.append(Check("ordinary", flag(local.ordinary), local.c2))
    checks.append(Check("non_anomalous", flag(not local.anomalous), local.jacobian_order))

    if inv.torsion_order is None:
        torsion = Check("torsion_prime_to_p", Status.SKIPPED, None)
    else:
        torsion = Check("torsion_prime_to_p", flag(inv.torsion_order % p != 0), inv.torsion_order)
    checks.append(torsion)

    alpha = None
    if inv.exceptional_primes is None:
        checks.append(Check("p_exceeds_alpha_bound", Status.SKIPPED, "no exceptional-prime data"))
    else:
        alpha = alpha_bound(inv)
        checks.append(Check("p_exceeds_alpha_bound", flag(p > alpha), alpha))

    if inv.sha_order is None:
        checks.append(Check("sha_prime_to_p", Status.SKIPPED, None))
    elif inv.sha_order % p == 0:
        checks.append(Check("sha_prime_to_p", Status.FAIL, inv.sha_order))
    elif inv.sha_provenance == PROVED:
        checks.append(Check("sha_prime_to_p", Status.PASS, inv.sha_order))
    else:
        checks.append(Check("sha_prime_to_p", Status.CONDITIONAL, inv.sha_order))

    checks.append(Check("tamagawa_prime_to_p", flag(inv.tamagawa_product % p != 0), inv.tamagawa_product))

    if inv.rank is None:
        checks.append(Check("rank_zero", Status.SKIPPED, None))
    else:
        checks.append(Check("rank_zero", flag(inv.rank == 0), inv.rank))

    # Serre-Pink: genus 1 and 2 are never exceptional; End = Z is an input assumption
    checks.append(
        Check(
            "big_image_genus",
            Status.CONDITIONAL if not is_genus_exceptional(curve.genus) else Status.FAIL,
            curve.genus,
        )
    )

    point = find_rational_point(curve)
    checks.append(Check("rational_point", Status.PASS if point else Status.SKIPPED, point))

    lam_check, n0 = _lambda_zero_check(p, local, inv)
    checks.append(lam_check)

    if n0 is not None and alpha is not None and torsion.status is Status.PASS:
        m0 = m0_bound(n0, alpha, p)
        checks.append(Check("m0_bound", Status.PASS, m0))
    else:
        checks.append(Check("m0_bound", Status.SKIPPED, None))

    by_name = {c.name: c for c in checks}
    conditionality: list[str] = []

    def conds(names):
        out = []
        for n in names:
            if by_name[n].status is Status.CONDITIONAL:
                if n == "sha_prime_to_p":
                    out.append(COND_SHA.format(inv.sha_provenance))
                elif n == "big_image_genus":
                    out.append(COND_BIG_IMAGE)
        return out

    if all(by_name[n].status in _OK for n in MAIN_CONDITIONS):
        conclusion = Conclusion.POINTS_STABLE
        conditionality = conds(MAIN_CONDITIONS)
    elif lam_check.status in _OK:
        conclusion = Conclusion.RANK_STABLE
        conditionality = conds(("sha_prime_to_p",))
    elif inv.rank and inv.n0_override == 0 and local.ordinary:
        conclusion = Conclusion.RANK_STABLE
        conditionality = [COND_N0]
    else:
        conclusion = Conclusion.INCONCLUSIVE
    return Certificate(p, tuple(checks), conclusion, tuple(conditionality))


def _lambda_zero_check(p: int, local: LocalData, inv: ArithmeticInvariants) -> tuple[Check, int | None]:
    """The lambda = 0 check and the n0 it yields (None when unknown)."""
    try:
        verdict = lambda_zero_criterion(p, local, inv)
    except InapplicableError as exc:
        return Check("lambda_zero", Status.SKIPPED, str(exc)), inv.n0_override
    if verdict.status == "holds":
        return Check("lambda_zero", Status.PASS, "f(0) is a p-adic unit"), 0
    if verdict.status == "conditional":
        return Check("lambda_zero", Status.CONDITIONAL, "; ".join(verdict.reasons)), 0
    return Check("lambda_zero", Status.FAIL, "; ".join(verdict.reasons)), inv.n0_override


# -- batch driver --------------------------------------------------------------


@dataclass(frozen=True)
class ScanReport:
    certificates: tuple[Certificate, ...]

    @property
    def summary(self) -> dict:
        counts = {c.value: 0 for c in Conclusion}
        anomalous, non_ordinary, skipped, errors = [], [], [], []
        for cert in self.certificates:
            counts[cert.conclusion.value] += 1
            names = {c.name: c for c in cert.checks}
            if "internal_consistency" in names:
                errors.append(cert.p)
                continue
            if names["good_reduction"].status is not Status.PASS:
                skipped.append(cert.p)
                continue
            if names["non_anomalous"].status is Status.FAIL:
                anomalous.append(cert.p)
            if names["ordinary"].status is Status.FAIL:
                non_ordinary.append(cert.p)
        return {
            "primes": len(self.certificates),
            "conclusions": counts,
            "anomalous": anomalous,
            "non_ordinary": non_ordinary,
            "skipped": skipped,
            "internal_errors": errors,
        }

    @property
    def has_internal_error(self) -> bool:
        return bool(self.summary["internal_errors"])

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.certificates]


def _certify_safe(args) -> Certificate:
    curve, inv, p = args
    try:
        return certify_prime(curve, inv, p)
    except InternalInconsistencyError as exc:
        log.error("internal inconsistency at p=%d: %s", p, exc)
        return _skipped_certificate(p, [Check("internal_consistency", Status.FAIL, str(exc))], "internal error")
    except (BadReductionError, InapplicableError, InconsistentInputError, ValidationError) as exc:
        log.warning("p=%d skipped: %s", p, exc)
        return _skipped_certificate(p, [], str(exc))


def scan(curve: CurveModel, inv: ArithmeticInvariants, primes: Iterable[int], jobs: int = 1) -> ScanReport:
    """One certificate per prime, in ascending order of p."""
    primes = sorted(set(primes))
    tasks = [(curve, inv, p) for p in primes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(_certify_safe, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        certs = [_certify_safe(t) for t in tasks]
    return ScanReport(tuple(certs))


def _fmt_witness(w) -> str:
    if w is None:
        return "-"
    if isinstance(w, dict):
        return ",".join(f"{k}={v}" for k, v in w.items())
    return str(w)


def render_text(report: ScanReport) -> str:
    """Aligned table mirroring the JSON certificates field for field."""
    header = ["p", "conclusion"] + list(CHECK_NAMES) + ["conditionality"]
    rows = []
    for cert in report.certificates:
        by_name = {c.name: c for c in cert.checks}
        row = [str(cert.p), cert.conclusion.value]
        for n in CHECK_NAMES:
            c = by_name.get(n)
            row.append("-" if c is None else f"{c.status.value}[{_fmt_witness(c.witness)}]")
        extra = [c for c in cert.checks if c.name not in CHECK_NAMES]
        conditionality = "; ".join(cert.conditionality) or "-"
        if extra:
            conditionality += " | " + "; ".join(f"{c.name}:{c.status.value}[{_fmt_witness(c.witness)}]" for c in extra)
        row.append(conditionality)
        rows.append(row)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [header] + rows]
    s = report.summary
    lines.append("")
    lines.append(
        "summary: "
        + ", ".join(f"{k}={v}" for k, v in s["conclusions"].items())
        + f"; primes={s['primes']}"
    )
    for key in ("anomalous", "non_ordinary", "skipped", "internal_errors"):
        lines.append(f"{key}: {' '.join(map(str, s[key])) or '-'}")
    return "\n".join(lines) + "\n"
