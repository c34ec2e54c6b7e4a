"""
Report and command schemas for CLI output
"""

import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ddbar.core.config import settings


class CommandEnum(str, Enum):
    """Top-level commands"""

    COHOMOLOGY = "cohomology"
    DDBAR = "ddbar"
    QISO = "qiso"
    MINIMAL_MODEL = "minimal-model"
    KOSZUL = "koszul"
    REGSEQ = "regseq"
    MASSEY = "massey"
    TORIC = "toric"
    CARTAN = "cartan"
    REPLICATE = "replicate"
    VALIDATE = "validate"


class OutputFormatEnum(str, Enum):
    TEXT = "text"
    JSON = "json"


class Command(BaseModel):
    """Echo of the command a report answers"""

    name: CommandEnum
    subcommand: Optional[str] = Field(None, description="Subcommand, for grouped commands")
    inputs: List[str] = Field(default_factory=list, description="Input paths")
    field: Optional[str] = Field(None, description="Coefficient field tag")
    truncation: Optional[int] = Field(None, ge=0, description="Truncation bound")
    output_format: OutputFormatEnum = Field(default=OutputFormatEnum.TEXT)
    options: Dict[str, Any] = Field(default_factory=dict, description="Further options")

    @property
    def label(self) -> str:
        return f"{self.name.value} {self.subcommand}" if self.subcommand else self.name.value


class Report(BaseModel):
    """Structured result of a command"""

    schema_version: str = Field(default_factory=lambda: settings.REPORT_SCHEMA_VERSION)
    command: Command
    verdict: Optional[bool] = Field(None, description="Overall verdict; None for pure computations")

    # Content
    tables: Dict[str, Any] = Field(default_factory=dict, description="Dimension tables")
    certificates: Dict[str, Any] = Field(default_factory=dict, description="Witnesses and certificates")
    details: Dict[str, Any] = Field(default_factory=dict, description="Further values")

    # Text mode only
    timing_seconds: Optional[float] = Field(None, description="Wall time, never serialized")

    def payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude={"timing_seconds"})

    def to_json(self) -> str:
        """Sorted, indented and free of timestamps"""
        return json.dumps(self.payload(), sort_keys=True, indent=2, ensure_ascii=False)
