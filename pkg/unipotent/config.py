#!/usr/bin/env python3
import os
from dotenv import load_dotenv

load_dotenv()

class Settings:

    LOG_LEVEL: str = os.getenv("UNIPOTENT_LOG_LEVEL", "INFO")

    #Randomized suites
    DEFAULT_SEED: int = int(os.getenv("UNIPOTENT_SEED", "42"))
    DEFAULT_TRIALS: int = int(os.getenv("UNIPOTENT_TRIALS", "64"))
    WORKERS: int = int(os.getenv("UNIPOTENT_WORKERS", "1"))

    #Richardson sampling
    RICHARDSON_FIELD: int = int(os.getenv("UNIPOTENT_RICHARDSON_FIELD", "101"))
    RICHARDSON_BUDGET_FACTOR: int = int(os.getenv("UNIPOTENT_RICHARDSON_BUDGET_FACTOR", "64"))
    INCONCLUSIVE_FRACTION: float = float(os.getenv("UNIPOTENT_INCONCLUSIVE_FRACTION", "0.5"))

    #Desk-scale limits
    MAX_WITT_LENGTH: int = int(os.getenv("UNIPOTENT_MAX_WITT_LENGTH", "4"))
    CENSUS_POINT_LIMIT: int = int(os.getenv("UNIPOTENT_CENSUS_POINT_LIMIT", str(10 ** 7)))
    MAX_CENSUS_DIMENSION: int = int(os.getenv("UNIPOTENT_MAX_CENSUS_DIMENSION", "6"))
    MAX_CENSUS_D: int = int(os.getenv("UNIPOTENT_MAX_CENSUS_D", "3"))
    CENSUS_CHUNK: int = int(os.getenv("UNIPOTENT_CENSUS_CHUNK", "4096"))

    #Output
    DEFAULT_FORMAT: str = os.getenv("UNIPOTENT_FORMAT", "json")
    OUTPUT_FORMATS = ("json", "csv")
    SUITES = ("orders", "witt", "artinhasse", "bch", "commvar", "all")

settings = Settings()
