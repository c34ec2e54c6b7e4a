"""
Fixture manifest schema for the regression runner
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class FixtureCheckEnum(str, Enum):
    """Checks the fixture runner knows how to perform"""

    PARSE = "parse"
    DDBAR = "ddbar"
    BETTI = "betti"
    FREENESS = "freeness"
    SPLITTING = "splitting"
    KOSZUL = "koszul"
    MINIMAL_MODEL = "minimal_model"
    LAMBDA_W = "lambda_w"
    OBSTRUCTION = "obstruction"
    MHS = "mhs"
    FLAG = "flag"
    CARTAN = "cartan"
    EXTENSION = "extension"


class FixtureCase(BaseModel):
    """One job: a check on a shipped document (or on built-in data) and its expected outcome"""

    name: str = Field(..., description="Unique case name; results are merged in name order")
    check: FixtureCheckEnum
    file: Optional[str] = Field(None, description="Document path relative to the manifest")
    expected: Any = Field(True, description="Expected observation")
    options: Dict[str, Any] = Field(default_factory=dict, description="Check-specific options")
    slow: bool = Field(default=False, description="Skipped unless slow cases are requested")


class FixtureManifest(BaseModel):
    cases: List[FixtureCase]

    @field_validator("cases")
    def validate_unique_names(cls, v):
        names = [case.name for case in v]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate case names: {', '.join(duplicates)}")
        return v


class FixtureResult(BaseModel):
    name: str
    check: FixtureCheckEnum
    passed: bool
    expected: Any = None
    observed: Any = None
    error: Optional[str] = None
