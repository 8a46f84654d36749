#!/usr/bin/env python3
import logging
from typing import Any, Dict, List, Sequence

from unipotent.services import parabolic, rootsys

logger = logging.getLogger(__name__)

EXCEPTIONAL_TYPES = ("G2", "F4", "E6", "E7", "E8")


def exceptional_row(label: str) -> Dict[str, Any]:
    """Coxeter data, smallest fundamental module and exponential-type threshold, all recomputed."""
    family, rank = rootsys.parse_type_label(label)
    rs = rootsys.build_root_system(family, rank)
    h = rootsys.coxeter_number(rs)
    index, dim = rootsys.minimal_fundamental_weight(rs)
    n_vmin = rootsys.weight_phi_pairing(rs, rootsys.fundamental_weight(rs, index))
    threshold = parabolic.exponential_type_threshold(rs)
    return {
        "type": label,
        "h": h,
        "2h-2": 2 * h - 2,
        "V_min": f"w{index + 1}",
        "dim_V_min": dim,
        "n(V_min)": n_vmin,
        "p0": threshold.p0,
    }


def exceptional_table(labels: Sequence[str] = EXCEPTIONAL_TYPES) -> List[Dict[str, Any]]:
    rows = [exceptional_row(label) for label in labels]
    logger.info(f"Reproduced exceptional data for {', '.join(labels)}")
    return rows
