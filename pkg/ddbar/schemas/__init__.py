"""
Pydantic schemas for input documents and reports
"""

from ddbar.schemas.formats import (
    AlgebraDocument,
    BicomplexDocument,
    BicomplexMapDocument,
    ContractionDocument,
    ContractionPartEnum,
    DimEntry,
    Document,
    DocumentKind,
    FanDocument,
    GeneratorDocument,
    MatrixEntry,
    TCbbaDocument,
)
from ddbar.schemas.fixtures import FixtureCase, FixtureCheckEnum, FixtureManifest, FixtureResult
from ddbar.schemas.reports import Command, CommandEnum, OutputFormatEnum, Report

__all__ = [
    "AlgebraDocument",
    "BicomplexDocument",
    "BicomplexMapDocument",
    "Command",
    "CommandEnum",
    "ContractionDocument",
    "ContractionPartEnum",
    "DimEntry",
    "Document",
    "DocumentKind",
    "FanDocument",
    "FixtureCase",
    "FixtureCheckEnum",
    "FixtureManifest",
    "FixtureResult",
    "GeneratorDocument",
    "MatrixEntry",
    "OutputFormatEnum",
    "Report",
    "TCbbaDocument",
]
