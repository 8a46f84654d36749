#!/usr/bin/env python3
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator
from sympy import isprime

from unipotent.config import settings

#Pydantic models for run configuration and report rows

class RunConfig(BaseModel):
    command: str
    family: Optional[str] = None
    rank: Optional[int] = None
    primes: List[int] = Field(default_factory=list)
    classical_primes: List[int] = Field(default_factory=lambda: [5, 7, 11])
    seed: int = settings.DEFAULT_SEED
    trials: int = settings.DEFAULT_TRIALS
    max_rank: int = 8
    suite: Optional[str] = None
    output_format: str = settings.DEFAULT_FORMAT
    output: Optional[str] = None
    workers: int = settings.WORKERS
    #single-object commands (witt, ah, commvar)
    action: Optional[str] = None
    p: Optional[int] = None
    n: Optional[int] = None
    terms: Optional[int] = None
    d: Optional[int] = None
    ambient: Optional[str] = None
    a: List[int] = Field(default_factory=list)
    b: List[int] = Field(default_factory=list)

    @field_validator("p")
    @classmethod
    def check_prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not isprime(value):
            raise ValueError(f"Not prime: {value}")
        return value

    @field_validator("n", "terms", "d")
    @classmethod
    def check_optional_positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError(f"Expected a positive integer, got {value}")
        return value

    @field_validator("primes", "classical_primes")
    @classmethod
    def check_primes(cls, values: List[int]) -> List[int]:
        bad = [p for p in values if not isprime(p)]
        if bad:
            raise ValueError(f"Not prime: {bad}")
        return sorted(set(values))

    @field_validator("seed")
    @classmethod
    def check_seed(cls, value: int) -> int:
        if not 0 <= value < 2 ** 64:
            raise ValueError(f"Seed must fit in 64 bits, got {value}")
        return value

    @field_validator("trials", "max_rank", "workers")
    @classmethod
    def check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"Expected a positive integer, got {value}")
        return value

    @field_validator("output_format")
    @classmethod
    def check_format(cls, value: str) -> str:
        if value not in settings.OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {settings.OUTPUT_FORMATS}")
        return value

    @field_validator("suite")
    @classmethod
    def check_suite(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in settings.SUITES:
            raise ValueError(f"Unknown suite {value!r}")
        return value


class OrderReport(BaseModel):
    case_id: str
    group: str
    parabolic: str
    p: int
    nP: int
    m: int
    predicted_order: int
    measured_degree: Optional[int] = None
    measured_order: Optional[int] = None
    exponent_order: Optional[int] = None
    status: str = "pass"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def row(self) -> Dict[str, Any]:
        data = self.model_dump()
        data["suite"] = "orders"
        data["passed"] = self.passed
        return data


class CheckRow(BaseModel):
    suite: str
    case_id: str
    status: str = "pass"
    detail: str = ""
    values: Dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "recorded")

    def row(self) -> Dict[str, Any]:
        data = {"suite": self.suite, "case_id": self.case_id, "status": self.status,
                "passed": self.passed, "detail": self.detail}
        data.update(self.values)
        return data
