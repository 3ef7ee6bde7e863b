"""JSON documents for algebras, tensors, R-matrices and two-link structures.

Complex numbers are ``[re, im]`` pairs (plain numbers are read as real);
matrices are row-major nested lists.
"""

from __future__ import annotations

import json
from collections import UserDict
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from . import LOGGER
from .catalog import CatalogEntry
from .exceptions import DocumentError
from .lie_tensor import CoefTensor2, LieAlgebraRep
from .poisson_geom import TwoLinkSpec
from .rmatrix import Convention, RMat


def complex_array(value, ndim: int) -> np.ndarray:
    """Parse a nested list of ``[re, im]`` pairs or plain numbers into an ``ndim`` array."""
    try:
        array = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as err:
        raise DocumentError(f"not a numeric array: {err}") from err
    if array.ndim == ndim + 1 and array.shape[-1] == 2:
        return array[..., 0] + 1j * array[..., 1]
    if array.ndim == ndim:
        return array.astype(complex)
    raise DocumentError(f"expected a {ndim}-dimensional array, got shape {array.shape}")


def encode_complex(array) -> list:
    """Inverse of `complex_array`: nested ``[re, im]`` pairs."""
    array = np.asarray(array, dtype=complex)
    return np.stack([array.real, array.imag], axis=-1).tolist()


class _Document(UserDict[str, Any]):
    def _require(self, key: str):
        if key not in self:
            raise DocumentError(f"missing field {key!r}", dict(self))
        return self[key]

    def _require_object(self, key: str) -> dict:
        value = self._require(key)
        if not isinstance(value, dict):
            raise DocumentError(f"field {key!r} must be an object", dict(self))
        return value


class AlgebraDocument(_Document):
    """``{"dim": d, "n": n, "basis": [...]}``."""

    @property
    def basis(self) -> np.ndarray:
        """The ``(d, n, n)`` basis."""
        basis = complex_array(self._require("basis"), 3)
        for key, axis in (("dim", 0), ("n", 1)):
            if key in self and self[key] != basis.shape[axis]:
                raise DocumentError(
                    f"{key}={self[key]} does not match basis shape {basis.shape}", dict(self)
                )
        return basis

    def to_algebra(self) -> LieAlgebraRep:
        """Build and validate the algebra."""
        return LieAlgebraRep.from_basis(self.basis)


class TensorDocument(_Document):
    """``{"coeffs": d×d}``, optionally with an ``"algebra"`` path or object."""

    @property
    def coeffs(self) -> np.ndarray:
        """The coefficient matrix."""
        return complex_array(self._require("coeffs"), 2)

    def to_tensor(self, algebra: LieAlgebraRep) -> CoefTensor2:
        """The tensor over ``algebra``."""
        return CoefTensor2(algebra, self.coeffs)


class RMatrixDocument(_Document):
    """``{"N": n, "convention": "plain"|"hat", "entries": N²×N²}``."""

    @property
    def convention(self) -> Convention:
        """Stored convention, plain when omitted."""
        return Convention(self.get("convention", Convention.PLAIN.value))

    def to_rmatrix(self) -> RMat:
        """The R-matrix as stored."""
        rmat = RMat(complex_array(self._require("entries"), 2), self.convention)
        if "N" in self and self["N"] != rmat.N:
            raise DocumentError(f"N={self['N']} does not match entries", dict(self))
        return rmat


class PhiKind(Enum):
    """How the cross term ``φ`` of a two-link document is given."""

    CONSTANT = "constant"
    AD_B_F = "ad_b_f"

    @classmethod
    def _missing_(cls, value):
        LOGGER.warning("Unexpected phi kind: %s", value)
        raise DocumentError(f"unknown phi kind {value!r}")


class TwoLinkDocument(_Document):
    """``{"algebra": <file or object>, "r": <tensor>, "phi": {"kind", "tensor", "f_scale"}}``."""

    @property
    def phi(self) -> _Document:
        """The ``phi`` block."""
        return _Document(self._require_object("phi"))

    @property
    def phi_kind(self) -> PhiKind:
        """Kind of ``phi``."""
        return PhiKind(self.phi._require("kind"))

    def to_two_link(self, algebra: LieAlgebraRep) -> TwoLinkSpec:
        """Build the two-link structure over ``algebra``."""
        r = TensorDocument(self._require_object("r")).to_tensor(algebra)
        tensor = TensorDocument(self.phi._require_object("tensor")).to_tensor(algebra)
        if self.phi_kind is PhiKind.CONSTANT:
            return TwoLinkSpec.with_constant_phi(algebra, r, tensor)
        try:
            f_scale = complex(self.phi.get("f_scale", 1.0))
        except (TypeError, ValueError) as err:
            raise DocumentError(f"f_scale must be a number: {err}", dict(self)) from err
        return TwoLinkSpec.with_ad_b_f(algebra, r, tensor, f_scale)


def read_document(path: Path | str) -> dict:
    """Parse a JSON file into a dict."""
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(document, dict):
        raise DocumentError(f"{path}: top level must be an object")
    return document


def resolve_algebra(document: dict, base: Path) -> LieAlgebraRep:
    """The algebra of ``document``: inline, by path relative to ``base``, or the document itself."""
    source = document.get("algebra", document)
    if isinstance(source, str):
        source = read_document(base / source)
    if not isinstance(source, dict):
        raise DocumentError("'algebra' must be a path or an object", document)
    return AlgebraDocument(source).to_algebra()


def referenced_paths(path: Path | str) -> list[Path]:
    """``path`` followed by the algebra file it names by path, if any."""
    path = Path(path)
    source = read_document(path).get("algebra")
    return [path] if not isinstance(source, str) else [path, path.parent / source]


def load_algebra(path: Path | str) -> LieAlgebraRep:
    """Read an algebra file."""
    return AlgebraDocument(read_document(path)).to_algebra()


def load_tensor(path: Path | str) -> CoefTensor2:
    """Read a tensor file carrying its ``"algebra"``."""
    path = Path(path)
    document = read_document(path)
    return TensorDocument(document).to_tensor(resolve_algebra(document, path.parent))


def load_rmatrix(path: Path | str) -> RMat:
    """Read an R-matrix file."""
    return RMatrixDocument(read_document(path)).to_rmatrix()


def load_two_link(path: Path | str) -> TwoLinkSpec:
    """Read a two-link file."""
    path = Path(path)
    document = TwoLinkDocument(read_document(path))
    document._require("algebra")  # pylint: disable=protected-access
    return document.to_two_link(resolve_algebra(dict(document), path.parent))


def dump_algebra(algebra: LieAlgebraRep) -> dict:
    """An algebra document."""
    return {"dim": algebra.dim, "n": algebra.n, "basis": encode_complex(algebra.basis)}


def dump_tensor(tensor: CoefTensor2) -> dict:
    """A tensor document without its algebra."""
    return {"coeffs": encode_complex(tensor.coeffs)}


def dump_rmatrix(rmat: RMat) -> dict:
    """An R-matrix document."""
    return {
        "N": rmat.N,
        "convention": rmat.convention.value,
        "entries": encode_complex(rmat.entries),
    }


def dump_entry(entry: CatalogEntry, q: complex | None = None) -> dict:
    """A catalog entry as a bundle of documents; the R-matrix is included when ``q`` is given."""
    bundle = {
        "name": entry.name,
        "algebra": dump_algebra(entry.algebra),
        "tensors": {
            name: {"algebra": dump_algebra(entry.algebra)} | dump_tensor(tensor)
            for name, tensor in entry.tensors.items()
        },
    }
    if q is not None and entry.rmatrix_family is not None:
        bundle["rmatrix"] = dump_rmatrix(entry.rmatrix(q))
    return bundle
