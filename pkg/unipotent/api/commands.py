#!/usr/bin/env python3
import logging
from typing import Any, Dict, List, Tuple

from unipotent.errors import UsageError
from unipotent.models import RunConfig
from unipotent.services import artinhasse, commvar, parabolic, rootsys, suites, tables, witt
from unipotent.services.exact import poly_str, rational_str, vp
from unipotent.services.writer import emit_rows, open_output, write_json_document

logger = logging.getLogger(__name__)

#Command handlers; each returns the process exit status


def _root_system(config: RunConfig) -> rootsys.RootSystem:
    if not config.family:
        raise UsageError("--family is required")
    try:
        if config.rank is None:
            family, rank = rootsys.parse_type_label(config.family)
        else:
            family, rank = config.family, config.rank
        return rootsys.build_root_system(family, rank)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _emit(config: RunConfig, rows: List[Dict[str, Any]], document: Any = None):
    """A single JSON document (defaults to the rows) or CSV of the rows."""
    if config.output_format == "csv":
        emit_rows(rows, "csv", config.output)
    else:
        with open_output(config.output) as stream:
            write_json_document(rows if document is None else document, stream)


def ordergrid_rows(rs: rootsys.RootSystem, primes: List[int]) -> List[Dict[str, Any]]:
    rows = []
    for levi in parabolic.enumerate_distinguished(rs):
        nP = parabolic.grade(rs, levi).nP
        for p in primes:
            m = parabolic.order_exponent(p, nP)
            rows.append({
                "type": rs.label,
                "I": parabolic.levi_descriptor(levi),
                "nP": nP,
                "p": p,
                "m": m,
                "predicted_order": p ** m,
                "good_prime": rootsys.is_good_prime(rs, p),
            })
    return rows


def cmd_ordergrid(config: RunConfig) -> int:
    rs = _root_system(config)
    if not config.primes:
        raise UsageError("--primes is required")
    _emit(config, ordergrid_rows(rs, config.primes))
    return 0


def cmd_distinguished(config: RunConfig) -> int:
    rs = _root_system(config)
    rows = []
    for levi in parabolic.enumerate_distinguished(rs):
        gp = parabolic.grade(rs, levi)
        rows.append({
            "type": rs.label,
            "I": gp.descriptor(),
            "nP": gp.nP,
            "graded_dims": {str(k): v for k, v in gp.graded_dims.items()},
        })
    _emit(config, rows)
    return 0


def cmd_tables(config: RunConfig) -> int:
    _emit(config, tables.exceptional_table())
    return 0


def cmd_rootsys(config: RunConfig) -> int:
    rs = _root_system(config)
    data = rs.to_dict()
    rows = [
        {"root": list(a), "coroot": coroot, "height": h, "length": length}
        for a, coroot, h, length in zip(rs.positive_roots, data["coroots"], data["heights"], data["length_class"])
    ]
    _emit(config, rows, data)
    return 0


def _witt_pair(config: RunConfig) -> Tuple[witt.WittVector, witt.WittVector]:
    if not config.a:
        raise UsageError("--a is required")
    a = witt.WittVector(config.p, config.a)
    b = witt.WittVector(config.p, config.b or [0] * a.n)
    if a.n != b.n:
        raise UsageError(f"--a and --b differ in length ({a.n} vs {b.n})")
    return a, b


def cmd_witt(config: RunConfig) -> int:
    if config.p is None:
        raise UsageError("--p is required")
    if config.action == "add":
        a, b = _witt_pair(config)
        rows = [{"p": a.p, "a": list(a.coords), "b": list(b.coords), "sum": list(witt.witt_add(a, b).coords)}]
    elif config.action == "order":
        a, _ = _witt_pair(config)
        rows = [{"p": a.p, "a": list(a.coords), "order": witt.witt_order(a),
                 "predicted_order": witt.predicted_witt_order(a)}]
    elif config.action == "sumpolys":
        n = config.n or 2
        try:
            sums = witt.witt_sum_polynomials(config.p, n)
        except ValueError as e:
            raise UsageError(str(e)) from e
        rows = [{"p": config.p, "m": m, "polynomial": poly_str(S), "terms": len(S)} for m, S in enumerate(sums)]
    else:
        raise UsageError(f"Unknown witt action {config.action!r}")
    _emit(config, rows)
    return 0


def cmd_ah(config: RunConfig) -> int:
    if config.p is None or config.terms is None:
        raise UsageError("--p and --terms are required")
    F = artinhasse.ah_series(config.p, config.terms)
    rows = [{"k": k, "coefficient": rational_str(c), "vp": vp(c, config.p)} for k, c in enumerate(F.series)]
    _emit(config, rows)
    return 0


def cmd_census(config: RunConfig) -> int:
    if config.p is None or config.d is None or not config.ambient:
        raise UsageError("--p, --d and --ambient are required")
    try:
        ambient = commvar.parse_ambient(config.ambient, config.p)
        result = commvar.census(config.d, ambient)
    except ValueError as e:
        raise UsageError(str(e)) from e
    row = result.to_dict()
    _emit(config, [row], row)
    return 0


def cmd_verify(config: RunConfig) -> int:
    if config.suite is None:
        raise UsageError("--suite is required")
    rows = suites.run_suite(config)
    emit_rows(rows, config.output_format, config.output, stream_lines=True)
    passed = suites.all_passed(rows)
    failed = [r["case_id"] for r in rows if not r["passed"] and r["status"] != "inconclusive"]
    if failed:
        logger.error(f"{len(failed)} failed cases: {', '.join(failed[:10])}")
    logger.info(f"verify {config.suite}: {len(rows)} rows, {'pass' if passed else 'fail'}")
    return 0 if passed else 1


COMMANDS = {
    "ordergrid": cmd_ordergrid,
    "distinguished": cmd_distinguished,
    "tables": cmd_tables,
    "rootsys": cmd_rootsys,
    "witt": cmd_witt,
    "ah": cmd_ah,
    "commvar": cmd_census,
    "verify": cmd_verify,
}
