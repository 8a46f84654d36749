#!/usr/bin/env python3
import hashlib
import os
from typing import List
import logging

import numpy as np

logger = logging.getLogger(__name__)

def calculate_content_hash(content: str) -> str:
    return hashlib.sha256(content.encode('utf-8')).hexdigest()

def stream_seed(seed: int, name: str) -> int:
    #Named RNG stream: 64 bits of sha256(seed:name)
    return int(calculate_content_hash(f"{seed}:{name}")[:16], 16)

def rng_for(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(stream_seed(seed, name))

def parse_int_list(text: str) -> List[int]:
    if text is None:
        return []
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise ValueError(f"Expected comma-separated integers, got {text!r}") from e

def parse_primes(text: str) -> List[int]:
    from sympy import isprime

    primes = parse_int_list(text)
    bad = [p for p in primes if not isprime(p)]
    if bad:
        raise ValueError(f"Not prime: {bad}")
    return sorted(set(primes))

def ensure_directory_exists(directory_path: str):
    if directory_path and not os.path.exists(directory_path):
        os.makedirs(directory_path, exist_ok=True)
        logger.info(f"Created directory: {directory_path}")
