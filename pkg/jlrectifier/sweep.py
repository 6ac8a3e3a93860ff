# jlrectifier/sweep.py
"""
Exhaustive parameter sweeps.

A SweepSpec is expanded into a flat, deterministic list of RunConfig documents
(q, e*f = n, z_E/F orbit representative, standard tower, jump sequence, d, h).
The configurations are independent; they are evaluated in worker processes and
merged back in enumeration order, so the summary never depends on ``jobs``.
"""
import hashlib
import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import divisors, primerange

from . import config as app_config
from .cyclotomic import certify_signature_formula
from .inner_form import InnerForm, JumpConfig, minimal_jump_sequences
from .logging_setup import configure_logging
from .models import (
    FailureRecord,
    FieldCertificate,
    RunConfig,
    SignatureCertificate,
    SweepSpec,
    SweepSummary,
)
from .report import try_build_report
from .tame_galois import (
    SubfieldDescriptor,
    TameParams,
    build_ambient,
    prime_base,
    standard_subfield_errors,
    validate_tower,
)

logger = logging.getLogger(__name__)

# below this many units every Frobenius orbit of mu_{q^f-1} is listed before sampling
ORBIT_ENUMERATION_LIMIT = 1 << 16


def rng_for(seed: int, *key) -> random.Random:
    """Deterministic RNG per (seed, key)."""
    material = ":".join(str(x) for x in (seed,) + key).encode()
    digest = hashlib.blake2b(material, digest_size=16).digest()
    return random.Random(int.from_bytes(digest, "big"))


def frobenius_orbit_rep(x: int, q: int, modulus: int) -> int:
    """Least element of the orbit of x under x -> q*x modulo q^f - 1."""
    start = x % modulus
    rep, y = start, (start * q) % modulus
    while y != start:
        rep = min(rep, y)
        y = (y * q) % modulus
    return rep


def _structural_z(q: int, f: int) -> List[int]:
    """z = 1, the canonical generator, and the canonical generator of each intermediate residue field."""
    units = q ** f - 1
    out = [0, 1 % units]
    for g in divisors(f):
        out.append((units // (q ** g - 1)) % units)
    reps: List[int] = []
    for x in out:
        r = frobenius_orbit_rep(x, q, units)
        if r not in reps:
            reps.append(r)
    return reps


def z_choices(q: int, f: int, spec: SweepSpec) -> Tuple[List[int], bool]:
    """
    Orbit representatives of z_E/F to run, and whether they were sampled.

    Without ``max_z_choices`` every orbit is listed as long as mu_{q^f-1} has at most
    ORBIT_ENUMERATION_LIMIT elements; larger groups fall back to SAMPLED_Z_CHOICES
    seeded draws on top of the structural representatives.
    """
    units = q ** f - 1
    if spec.z_policy == "trivial" or units == 1:
        return [0], False
    cap = spec.max_z_choices
    rng = rng_for(spec.seed, "z", q, f)
    if units <= ORBIT_ENUMERATION_LIMIT:
        every = sorted({frobenius_orbit_rep(x, q, units) for x in range(units)})
        if cap is None or len(every) <= cap:
            return every, False
        structural = _structural_z(q, f)[:cap]
        rest = [x for x in every if x not in structural]
        chosen = structural + rng.sample(rest, min(cap - len(structural), len(rest)))
        return sorted(chosen), True
    if cap is None:
        cap = app_config.SAMPLED_Z_CHOICES
    chosen = _structural_z(q, f)[:cap]
    for _ in range(8 * cap):
        if len(chosen) >= cap:
            break
        r = frobenius_orbit_rep(rng.randrange(units), q, units)
        if r not in chosen:
            chosen.append(r)
    return sorted(chosen), True


def standard_towers(params: TameParams, max_levels: int) -> List[Tuple[SubfieldDescriptor, ...]]:
    """Every standard tower E_0 > ... > E_t > F with at most ``max_levels`` levels."""
    model = build_ambient(params)
    candidates = sorted(
        K
        for K in (SubfieldDescriptor(a, b) for a in divisors(params.e) for b in divisors(params.f))
        if not K.is_base(params) and not standard_subfield_errors(model, K)
    )
    towers: List[Tuple[SubfieldDescriptor, ...]] = []

    def extend(chain: List[SubfieldDescriptor]) -> None:
        towers.append(tuple(chain))
        if len(chain) == max_levels:
            return
        last = chain[-1]
        for K in candidates:
            if K.e_rel % last.e_rel == 0 and K.f_rel % last.f_rel == 0 and K.degree_below > last.degree_below:
                extend(chain + [K])

    for K in candidates:
        if K.e_rel == 1:
            extend([K])
    return [t for t in towers if not validate_tower(model, list(t))]


def jump_sequences(params: TameParams, tower: Sequence[SubfieldDescriptor]) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = []
    for minimal in (True, False):
        for jumps in minimal_jump_sequences(params, tower, minimal=minimal):
            if jumps not in out:
                out.append(jumps)
    return out


def hasse_values(d: int, spec: SweepSpec) -> List[int]:
    if d == 1:
        return [0]
    if spec.h_values is not None:
        return sorted({h for h in spec.h_values if gcd(h, d) == 1})
    return [h for h in range(1, d) if gcd(h, d) == 1]


def enumerate_configs(spec: SweepSpec) -> Tuple[List[RunConfig], List[str]]:
    """All configurations of the sweep in a fixed order, plus the (q, f) pairs whose z choices were sampled."""
    configs: List[RunConfig] = []
    sampled: List[str] = []
    flags = spec.flags
    for q in sorted(set(spec.q_values)):
        p = prime_base(q)
        for n in range(spec.n_min, spec.n_max + 1):
            for e in divisors(n):
                if e % p == 0:
                    continue
                f = n // e
                zs, was_sampled = z_choices(q, f, spec)
                if was_sampled and f"{q},{f}" not in sampled:
                    sampled.append(f"{q},{f}")
                for z in zs:
                    params = TameParams(q=q, e=e, f=f, z_ef_index=z)
                    for tower in standard_towers(params, spec.max_levels):
                        for jumps in jump_sequences(params, tower):
                            for d in divisors(n):
                                if d == 1 and not spec.include_split:
                                    continue
                                for h in hasse_values(d, spec):
                                    jc = JumpConfig(params=params, tower=tower, jumps=jumps, form=InnerForm(n // d, d, h))
                                    reasons = jc.errors()
                                    if reasons:
                                        logger.debug("skipping %s: %s", jc, reasons)
                                        continue
                                    configs.append(RunConfig.from_jump_config(jc, flags))
    logger.info("sweep enumerates %d configurations (%d sampled z pairs)", len(configs), len(sampled))
    return configs, sampled


@dataclass(frozen=True)
class ConfigOutcome:
    index: int
    ok: bool
    failed: Tuple[str, ...]
    error: Optional[str]
    inner_class_hits: int


def run_one(task: Tuple[int, RunConfig, bool]) -> ConfigOutcome:
    index, run_config, mutate = task
    report, error = try_build_report(run_config, mutate_zeta=mutate)
    if report is None:
        logger.warning("configuration %d raised %s", index, error)
        return ConfigOutcome(index=index, ok=False, failed=("error",), error=error, inner_class_hits=0)
    return ConfigOutcome(
        index=index,
        ok=report.ok,
        failed=tuple(report.verdicts.failed()),
        error=None,
        inner_class_hits=report.inner_class_hits,
    )


def iter_outcomes(configs: Sequence[RunConfig], mutate_zeta: bool = False, jobs: int = 1) -> Iterator[ConfigOutcome]:
    """Outcomes in enumeration order, whatever the number of workers."""
    tasks = [(i, c, mutate_zeta) for i, c in enumerate(configs)]
    if jobs <= 1 or len(tasks) < 2:
        yield from map(run_one, tasks)
        return
    level = logging.getLevelName(logging.getLogger().getEffectiveLevel())
    chunk = max(1, len(tasks) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs, initializer=configure_logging, initargs=(level,)) as executor:
        yield from executor.map(run_one, tasks, chunksize=chunk)


def summarize(
    spec: SweepSpec, configs: Sequence[RunConfig], outcomes: Iterable[ConfigOutcome], z_sampled: Sequence[str] = ()
) -> SweepSummary:
    summary = SweepSummary(spec=spec, z_sampled=list(z_sampled))
    counts: Counter = Counter()
    for outcome in sorted(outcomes, key=lambda o: o.index):
        summary.total += 1
        summary.inner_class_hits += outcome.inner_class_hits
        if outcome.ok:
            summary.passed += 1
            continue
        summary.failed += 1
        counts.update(outcome.failed)
        summary.failures.append(
            FailureRecord(
                config=configs[outcome.index],
                failed=list(outcome.failed),
                error=outcome.error,
                mutate_zeta=spec.mutate_zeta,
            )
        )
    summary.verdict_counts = dict(sorted(counts.items()))
    return summary


def run_sweep(spec: SweepSpec) -> SweepSummary:
    configs, sampled = enumerate_configs(spec)
    outcomes = list(iter_outcomes(configs, mutate_zeta=spec.mutate_zeta, jobs=spec.jobs))
    summary = summarize(spec, configs, outcomes, sampled)
    logger.info("sweep done: %d passed, %d failed", summary.passed, summary.failed)
    return summary


# --- signature certification ---


def signature_fields(bound: int) -> List[Tuple[int, int]]:
    """(p, k) for every prime power p**k <= bound."""
    out = []
    for p in primerange(2, bound + 1):
        k = 1
        while p ** k <= bound:
            out.append((int(p), k))
            k += 1
    return out


def certify_field(task: Tuple[int, int, bool]) -> FieldCertificate:
    p, k, exhaustive = task
    return FieldCertificate(p=p, k=k, exhaustive=exhaustive, failures=certify_signature_formula(p, k, exhaustive=exhaustive))


def certify_signatures(bound: int, exhaustive_limit: int, jobs: int = 1) -> SignatureCertificate:
    tasks = [(p, k, p ** k <= exhaustive_limit) for p, k in signature_fields(bound)]
    if jobs <= 1:
        fields = [certify_field(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            fields = list(executor.map(certify_field, tasks, chunksize=max(1, len(tasks) // (jobs * 8))))
    certificate = SignatureCertificate(bound=bound, exhaustive_limit=exhaustive_limit, fields=fields)
    logger.info("signature certification over %d fields: %s", len(fields), "ok" if certificate.ok else "FAILED")
    return certificate
