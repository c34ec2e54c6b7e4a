"""
Pydantic schemas for the JSON input documents
"""

from enum import Enum
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class DocumentKind(str, Enum):
    """Kinds of input document"""

    BICOMPLEX = "bicomplex"
    ALGEBRA = "algebra"
    FAN = "fan"
    TCBBA = "tcbba"
    BICOMPLEX_MAP = "bicomplex_map"


class ContractionPartEnum(str, Enum):
    """Contraction parts: 10 lowers p, 01 lowers q"""

    P10 = "10"
    P01 = "01"


# Bicomplexes


class DimEntry(BaseModel):
    bidegree: Tuple[int, int] = Field(..., description="Bidegree (p, q)")
    dim: int = Field(..., ge=0, description="Dimension of the (p, q) component")


class MatrixEntry(BaseModel):
    """One nonzero entry of a block, keyed by its source bidegree"""

    bidegree: Tuple[int, int] = Field(..., description="Source bidegree")
    row: int = Field(..., ge=0, description="0-based row in the target component")
    col: int = Field(..., ge=0, description="0-based column in the source component")
    value: str = Field(..., description="Scalar expression")


class BicomplexDocument(BaseModel):
    """Schema for a finite-dimensional bicomplex"""

    kind: Literal["bicomplex"] = "bicomplex"
    name: str = Field(default="", description="Display name")
    dims: List[DimEntry] = Field(..., description="Per-bidegree dimensions")

    # Differentials and real structure
    del_: List[MatrixEntry] = Field(default_factory=list, alias="del", description="Entries of del")
    delbar: List[MatrixEntry] = Field(default_factory=list, description="Entries of delbar")
    sigma: Optional[List[MatrixEntry]] = Field(None, description="Entries of the real structure")
    certified_degree: Optional[int] = Field(None, ge=0, description="Top degree the data is complete through")

    @field_validator("dims")
    def validate_unique_dims(cls, v):
        seen = set()
        for entry in v:
            if entry.bidegree in seen:
                raise ValueError(f"bidegree {list(entry.bidegree)} listed twice")
            seen.add(entry.bidegree)
        return v

    class Config:
        populate_by_name = True


class BicomplexMapDocument(BaseModel):
    """Schema for a bidegree-preserving map between two inline bicomplexes"""

    kind: Literal["bicomplex_map"] = "bicomplex_map"
    name: str = Field(default="", description="Display name")
    source: BicomplexDocument
    target: BicomplexDocument
    blocks: List[MatrixEntry] = Field(default_factory=list, description="Entries of the map")
    real: bool = Field(default=False, description="Whether the map commutes with sigma")


# Algebras


class GeneratorDocument(BaseModel):
    """One generator; exactly one of degree and bidegree"""

    name: str = Field(..., pattern=r"^[A-Za-z_][A-Za-z0-9_]*$", description="Generator name")
    degree: Optional[int] = Field(None, ge=0, description="Degree in a singly graded algebra")
    bidegree: Optional[Tuple[int, int]] = Field(None, description="Bidegree in a bigraded algebra")
    real: Optional[str] = Field(None, description="'fixed' or the name of the conjugate generator")
    weight: Optional[int] = Field(None, ge=1, description="Weight grading")

    # Differentials
    d: Optional[str] = Field(None, description="d of the generator (singly graded)")
    del_: Optional[str] = Field(None, alias="del", description="del of the generator")
    delbar: Optional[str] = Field(None, description="delbar of the generator")

    @model_validator(mode="after")
    def validate_grading(self):
        if (self.degree is None) == (self.bidegree is None):
            raise ValueError(f"generator {self.name} needs exactly one of degree and bidegree")
        if self.degree is not None and (self.del_ is not None or self.delbar is not None):
            raise ValueError(f"generator {self.name} is singly graded; use d")
        if self.bidegree is not None and self.d is not None:
            raise ValueError(f"generator {self.name} is bigraded; use del and delbar")
        return self

    class Config:
        populate_by_name = True


class AlgebraDocument(BaseModel):
    """Schema for a (bi)graded algebra presented by generators and relations"""

    kind: Literal["algebra"] = "algebra"
    name: str = Field(default="", description="Display name")
    bigraded: bool = Field(..., description="Bigraded (del, delbar) or singly graded (d)")
    truncation: int = Field(..., ge=0, description="Total degree bound N")
    real_structure: bool = Field(default=False, description="Whether generators carry a real structure")
    generators: List[GeneratorDocument] = Field(..., description="Generators in order")
    relations: List[str] = Field(default_factory=list, description="Homogeneous relations")
    notes: List[str] = Field(default_factory=list, description="Free-form header lines")

    @model_validator(mode="after")
    def validate_generators(self):
        for g in self.generators:
            if self.bigraded and g.bidegree is None:
                raise ValueError(f"generator {g.name} needs a bidegree")
            if not self.bigraded and g.degree is None:
                raise ValueError(f"generator {g.name} needs a degree")
            if self.real_structure and g.real is None:
                raise ValueError(f"generator {g.name} needs a real field")
        return self


# Fans


class FanDocument(BaseModel):
    """Schema for a smooth fan; cones list 1-based ray indices"""

    kind: Literal["fan"] = "fan"
    name: str = Field(default="", description="Display name")
    rank: int = Field(..., ge=1, description="Rank of the lattice")
    rays: List[List[int]] = Field(..., description="Primitive ray vectors")
    cones: List[List[int]] = Field(..., description="Maximal cones as 1-based ray indices")
    complete: bool = Field(default=True, description="Whether the fan covers the whole space")

    @field_validator("cones")
    def validate_cone_indices(cls, v):
        for cone in v:
            if any(i < 1 for i in cone):
                raise ValueError("cone indices are 1-based")
        return v


# Torus contractions


class ContractionDocument(BaseModel):
    generator: str = Field(..., description="Generator the contraction acts on")
    index: int = Field(..., ge=1, description="1-based index of the contraction")
    part: ContractionPartEnum = Field(..., description="Contraction part")
    value: str = Field(..., description="Image as an element expression")


class TCbbaDocument(BaseModel):
    """Schema for a cbba with torus contractions"""

    kind: Literal["tcbba"] = "tcbba"
    name: str = Field(default="", description="Display name")
    algebra: AlgebraDocument
    rank: int = Field(..., ge=0, description="Number of contractions")
    contractions: List[ContractionDocument] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_indices(self):
        for c in self.contractions:
            if c.index > self.rank:
                raise ValueError(f"contraction index {c.index} exceeds rank {self.rank}")
        return self


Document = Annotated[
    Union[BicomplexDocument, AlgebraDocument, FanDocument, TCbbaDocument, BicomplexMapDocument],
    Field(discriminator="kind"),
]
