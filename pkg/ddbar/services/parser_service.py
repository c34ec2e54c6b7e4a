"""
Parser service: JSON documents to typed objects and back
"""

import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from pydantic import TypeAdapter, ValidationError

from ddbar.core.exceptions import FieldMismatchError, ParseError, SchemaValidationError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import D, DEL, DELBAR, Element, Generator, GradedAlgebra
from ddbar.models.bicomplex import Bicomplex, BicomplexMap, Bidegree
from ddbar.models.cartan import TCbba
from ddbar.models.expressions import evaluate
from ddbar.models.fan import Fan
from ddbar.models.linalg import SparseMatrix
from ddbar.models.scalars import FieldTag, Scalar, parse_scalar
from ddbar.schemas.formats import (
    AlgebraDocument,
    BicomplexDocument,
    BicomplexMapDocument,
    ContractionDocument,
    DimEntry,
    Document,
    DocumentKind,
    FanDocument,
    GeneratorDocument,
    MatrixEntry,
    TCbbaDocument,
)
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.cartan_service import CartanService
from ddbar.services.toric_service import ToricService

Parsed = Union[Bicomplex, BicomplexMap, GradedAlgebra, Fan, TCbba]

_ADAPTER = TypeAdapter(Document)
KINDS = {kind.value for kind in DocumentKind}


@contextmanager
def _located(path: str) -> Iterator[None]:
    """Prefix expression errors raised inside the block with their document path"""
    try:
        yield
    except ParseError as error:
        error.detail["path"] = path
        error.message = f"{path}: {error.message}"
        error.args = (error.message,)
        raise


class ParserService(LoggerMixin):
    """Service reading and writing the JSON input formats"""

    def __init__(self, field: Optional[FieldTag] = None):
        self.field = field
        self.algebra_service = AlgebraService()
        self.cartan_service = CartanService()
        self.toric_service = ToricService()

    # Loading

    def load(self, path: Union[str, Path]) -> Parsed:
        path = Path(path)
        self.log_debug("Loading document", path=str(path))
        return self.loads(path.read_text(encoding="utf-8"), source=str(path))

    def loads(self, text: str, source: str = "<string>") -> Parsed:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno, source=source)
        return self.from_data(data, source)

    def from_data(self, data: Any, source: str = "<data>") -> Parsed:
        try:
            document = _ADAPTER.validate_python(data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = first["loc"]
            if loc and loc[0] in KINDS:
                loc = loc[1:]
            path = ".".join(str(part) for part in loc)
            raise SchemaValidationError(
                f"{source}: {path or 'document'}: {first['msg']}",
                {"source": source, "path": path, "errors": len(e.errors())},
            )
        return self.build(document)

    def build(self, document: Any) -> Parsed:
        if isinstance(document, BicomplexDocument):
            return self.build_bicomplex(document)
        if isinstance(document, BicomplexMapDocument):
            return self.build_bicomplex_map(document)
        if isinstance(document, AlgebraDocument):
            return self.build_algebra(document)
        if isinstance(document, FanDocument):
            return self.build_fan(document)
        if isinstance(document, TCbbaDocument):
            return self.build_tcbba(document)
        raise TypeError(f"unsupported document {type(document).__name__}")

    # Scalars and field checks

    def _scalar(self, text: str, path: str) -> Scalar:
        with _located(path):
            c = parse_scalar(text)
        self._check_field(c, path)
        return c

    def _check_field(self, c: Scalar, path: str) -> None:
        if self.field is not None and not self.field.contains(c.minimal_tag()):
            raise FieldMismatchError(
                f"{path}: {c.to_text()} is not in {self.field.value}",
                {"path": path, "value": c.to_text(), "field": self.field.value},
            )

    def element(self, algebra: GradedAlgebra, text: str, path: str, reduce: bool = True) -> Element:
        with _located(path):
            if reduce:
                element = algebra.parse(text)
            else:
                element = evaluate(text, algebra.scalar, algebra.generator)
        for c in element.terms.values():
            self._check_field(c, path)
        return element

    # Bicomplexes

    def _blocks(
        self,
        entries: List[MatrixEntry],
        dims: Dict[Bidegree, int],
        shift,
        path: str,
    ) -> Dict[Bidegree, SparseMatrix]:
        grouped: Dict[Bidegree, List[Tuple[int, int, Scalar]]] = {}
        for k, entry in enumerate(entries):
            bd = tuple(entry.bidegree)
            target = shift(bd)
            where = f"{path}.{k}"
            if entry.col >= dims.get(bd, 0) or entry.row >= dims.get(target, 0):
                raise SchemaValidationError(
                    f"{where}: entry ({entry.row}, {entry.col}) outside the "
                    f"{dims.get(target, 0)}x{dims.get(bd, 0)} block at {list(bd)}",
                    {"path": where},
                )
            grouped.setdefault(bd, []).append((entry.row, entry.col, self._scalar(entry.value, f"{where}.value")))
        return {
            bd: SparseMatrix.from_entries(dims.get(shift(bd), 0), dims[bd], items)
            for bd, items in grouped.items()
        }

    def build_bicomplex(self, document: BicomplexDocument, path: str = "") -> Bicomplex:
        prefix = f"{path}." if path else ""
        dims = {tuple(e.bidegree): e.dim for e in document.dims}
        sigma = None
        if document.sigma is not None:
            sigma = self._blocks(document.sigma, dims, lambda bd: (bd[1], bd[0]), f"{prefix}sigma")
        bicomplex = Bicomplex(
            dims,
            self._blocks(document.del_, dims, lambda bd: (bd[0] + 1, bd[1]), f"{prefix}del"),
            self._blocks(document.delbar, dims, lambda bd: (bd[0], bd[1] + 1), f"{prefix}delbar"),
            sigma,
            certified_degree=document.certified_degree,
            name=document.name,
        )
        bicomplex.validate()
        self.log_debug("Parsed bicomplex", name=document.name, bidegrees=len(bicomplex.dims))
        return bicomplex

    def build_bicomplex_map(self, document: BicomplexMapDocument) -> BicomplexMap:
        source = self.build_bicomplex(document.source, "source")
        target = self.build_bicomplex(document.target, "target")
        blocks: Dict[Bidegree, List[Tuple[int, int, Scalar]]] = {}
        for k, entry in enumerate(document.blocks):
            bd = tuple(entry.bidegree)
            where = f"blocks.{k}"
            if entry.col >= source.dim(bd) or entry.row >= target.dim(bd):
                raise SchemaValidationError(f"{where}: entry outside the block at {list(bd)}", {"path": where})
            blocks.setdefault(bd, []).append((entry.row, entry.col, self._scalar(entry.value, f"{where}.value")))
        mapping = BicomplexMap(
            source,
            target,
            {bd: SparseMatrix.from_entries(target.dim(bd), source.dim(bd), items) for bd, items in blocks.items()},
            document.real,
        )
        mapping.validate()
        return mapping

    # Algebras

    def build_algebra(self, document: AlgebraDocument, path: str = "") -> GradedAlgebra:
        prefix = f"{path}." if path else ""
        generators = []
        for g in document.generators:
            bidegree = tuple(g.bidegree) if g.bidegree is not None else (g.degree, 0)
            partner = None
            if document.real_structure:
                partner = g.name if g.real == "fixed" else g.real
            generators.append(Generator(g.name, bidegree, partner, g.weight))
        algebra = GradedAlgebra(
            generators,
            bigraded=document.bigraded,
            truncation=document.truncation,
            name=document.name,
            real_structure=document.real_structure,
            notes=document.notes,
        )
        for k, text in enumerate(document.relations):
            algebra.add_relation(self.element(algebra, text, f"{prefix}relations.{k}", reduce=False))
        for k, g in enumerate(document.generators):
            where = f"{prefix}generators.{k}"
            for kind, text in ((D, g.d), (DEL, g.del_), (DELBAR, g.delbar)):
                if text is not None:
                    image = self.element(algebra, text, f"{where}.{kind}")
                    if image:
                        algebra.set_differential(g.name, kind, image)
        self.algebra_service.require_valid(algebra)
        self.log_debug("Parsed algebra", name=document.name, generators=algebra.n)
        return algebra

    # Fans

    def build_fan(self, document: FanDocument) -> Fan:
        fan = Fan(
            document.rank,
            [tuple(ray) for ray in document.rays],
            [frozenset(i - 1 for i in cone) for cone in document.cones],
            document.complete,
            document.name,
        )
        return self.toric_service.validate_fan(fan)

    # Torus contractions

    def build_tcbba(self, document: TCbbaDocument) -> TCbba:
        algebra = self.build_algebra(document.algebra, "algebra")
        contractions = {}
        for k, c in enumerate(document.contractions):
            key = (c.generator, c.index - 1, c.part.value)
            if key in contractions:
                raise SchemaValidationError(f"contractions.{k}: duplicate contraction", {"path": f"contractions.{k}"})
            contractions[key] = self.element(algebra, c.value, f"contractions.{k}.value")
        tcbba = TCbba(algebra, document.rank, contractions, document.name)
        return self.cartan_service.require_valid(tcbba)

    # Serialization

    def _entries(self, maps: Dict[Bidegree, SparseMatrix]) -> List[MatrixEntry]:
        return [
            MatrixEntry(bidegree=bd, row=i, col=j, value=c.to_text())
            for bd in sorted(maps)
            for i, j, c in maps[bd].entries()
        ]

    def bicomplex_document(self, bicomplex: Bicomplex) -> BicomplexDocument:
        return BicomplexDocument(
            name=bicomplex.name,
            dims=[DimEntry(bidegree=bd, dim=n) for bd, n in sorted(bicomplex.dims.items())],
            del_=self._entries(bicomplex.del_maps),
            delbar=self._entries(bicomplex.delbar_maps),
            sigma=None if bicomplex.sigma is None else self._entries(bicomplex.sigma),
            certified_degree=bicomplex.certified_degree,
        )

    def algebra_document(self, algebra: GradedAlgebra) -> AlgebraDocument:
        generators = []
        for i, g in enumerate(algebra.generators):
            entry: Dict[str, Any] = {"name": g.name, "weight": g.weight}
            if algebra.bigraded:
                entry["bidegree"] = g.bidegree
                for kind, images in ((DEL, algebra.del_images), (DELBAR, algebra.delbar_images)):
                    if images.get(i):
                        entry[kind] = algebra.element_text(images[i])
            else:
                entry["degree"] = g.degree
                if algebra.del_images.get(i):
                    entry["d"] = algebra.element_text(algebra.del_images[i])
            if algebra.real_structure:
                entry["real"] = "fixed" if g.partner == g.name else g.partner
            generators.append(GeneratorDocument(**entry))
        return AlgebraDocument(
            name=algebra.name,
            bigraded=algebra.bigraded,
            truncation=algebra.truncation,
            real_structure=algebra.real_structure,
            generators=generators,
            relations=[algebra.element_text(r) for r in algebra.relations],
            notes=algebra.notes,
        )

    def document(self, obj: Parsed) -> Any:
        if isinstance(obj, Bicomplex):
            return self.bicomplex_document(obj)
        if isinstance(obj, BicomplexMap):
            return BicomplexMapDocument(
                source=self.bicomplex_document(obj.source),
                target=self.bicomplex_document(obj.target),
                blocks=self._entries(obj.blocks),
                real=obj.real,
            )
        if isinstance(obj, GradedAlgebra):
            return self.algebra_document(obj)
        if isinstance(obj, Fan):
            return FanDocument(
                name=obj.name,
                rank=obj.rank,
                rays=[list(ray) for ray in obj.rays],
                cones=sorted(sorted(i + 1 for i in cone) for cone in obj.cones),
                complete=obj.complete,
            )
        if isinstance(obj, TCbba):
            order = obj.algebra.index
            return TCbbaDocument(
                name=obj.name,
                algebra=self.algebra_document(obj.algebra),
                rank=obj.rank,
                contractions=[
                    ContractionDocument(
                        generator=name, index=a + 1, part=part, value=obj.algebra.element_text(value)
                    )
                    for (name, a, part), value in sorted(
                        obj.contractions.items(), key=lambda kv: (order[kv[0][0]], kv[0][1], kv[0][2])
                    )
                    if value
                ],
            )
        raise TypeError(f"cannot serialize {type(obj).__name__}")

    def serialize(self, obj: Parsed) -> str:
        """Deterministic JSON accepted back by :meth:`loads`"""
        payload = self.document(obj).model_dump(mode="json", by_alias=True, exclude_none=True)
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
