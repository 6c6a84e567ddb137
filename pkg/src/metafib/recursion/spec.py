"""Recursion specifications: the two families, presets, and the spec mini-language."""

from __future__ import annotations

import json
import re
from collections.abc import Callable, Mapping
from typing import Annotated, Any, Literal

from pydantic import Field, PositiveInt, ValidationError

from metafib.models.base import FrozenModel

NonNegInt = Annotated[int, Field(ge=0)]

_INT_RE = re.compile(r"^\d+$")


class SpecError(ValueError):
    """Base class for problems with a recursion specification."""


class SpecParseError(SpecError):
    """Raised when spec text cannot be parsed; `token` names the offending piece."""

    def __init__(self, message: str, *, token: str) -> None:
        super().__init__(f"{message}: {token!r}")
        self.token = token


class SpecArityError(SpecError):
    """Raised when a homogeneous parameter list does not come in (a, b) pairs."""


class SpecValidationError(SpecError):
    """Raised when parsed values violate the family constraints."""


class HomogeneousFamily(FrozenModel):
    """T(n) = sum_p T(n - a_p - T(n - b_p)), abbreviated (a_1, b_1, ..., a_k, b_k)."""

    kind: Literal["homog"] = "homog"
    params: Annotated[tuple[tuple[NonNegInt, NonNegInt], ...], Field(min_length=1)]

    @property
    def k(self) -> int:
        """Return the number of summands."""
        return len(self.params)


class ConwayFamily(FrozenModel):
    """A(n) = A(n - A^k(n-1)) + A(A^k(n-1)) with A^k the k-fold composition."""

    kind: Literal["conway"] = "conway"
    k: PositiveInt


Family = Annotated[HomogeneousFamily | ConwayFamily, Field(discriminator="kind")]


class RecursionSpec(FrozenModel):
    """A recursion family variant together with its initial conditions T(1..r)."""

    family: Family
    initial_conditions: Annotated[tuple[PositiveInt, ...], Field(min_length=1)]

    @property
    def r(self) -> int:
        """Return the number of initial conditions."""
        return len(self.initial_conditions)

    def __str__(self) -> str:
        return render_spec(self)


def spot_count(spec: RecursionSpec) -> int:
    """Return the number of spot functions of the recursion.

    Args:
        spec: Recursion specification.

    Returns:
        k for the homogeneous family; 2 (mother and father) for the Conway family.
    """
    if isinstance(spec.family, HomogeneousFamily):
        return spec.family.k
    return 2


def render_spec(spec: RecursionSpec) -> str:
    """Render the canonical explicit form of a spec.

    Args:
        spec: Recursion specification.

    Returns:
        Text such as ``homog:0,1,1,2;ic=1,1`` or ``conway:1;ic=1,1``.
    """
    ic = ",".join(str(v) for v in spec.initial_conditions)
    family = spec.family
    if isinstance(family, HomogeneousFamily):
        params = ",".join(f"{a},{b}" for a, b in family.params)
        return f"homog:{params};ic={ic}"
    return f"conway:{family.k};ic={ic}"


def _build(family: HomogeneousFamily | ConwayFamily, ic: list[int]) -> RecursionSpec:
    """Validate and assemble a spec, mapping pydantic errors onto spec errors."""
    if not ic:
        raise SpecValidationError("initial conditions must not be empty")
    try:
        return RecursionSpec(family=family, initial_conditions=tuple(ic))
    except ValidationError as exc:
        raise SpecValidationError(str(exc)) from None


def _homogeneous(flat: list[int]) -> HomogeneousFamily:
    """Pair up a flat (a_1, b_1, ..., a_k, b_k) list."""
    if not flat:
        raise SpecArityError("homogeneous recursion needs at least one (a, b) pair")
    if len(flat) % 2:
        raise SpecArityError(
            f"homogeneous parameters must come in (a, b) pairs, got {len(flat)} values",
        )
    pairs = tuple((flat[i], flat[i + 1]) for i in range(0, len(flat), 2))
    try:
        return HomogeneousFamily(params=pairs)
    except ValidationError as exc:
        raise SpecValidationError(str(exc)) from None


def _conway(k: int) -> ConwayFamily:
    """Build a Conway-family variant, mapping validation errors."""
    try:
        return ConwayFamily(k=k)
    except ValidationError as exc:
        raise SpecValidationError(str(exc)) from None


def _newman(r: int) -> RecursionSpec:
    if r < 1:
        raise SpecValidationError(f"newman requires r >= 1, got {r}")
    return _build(_conway(1), [1] * (r + 1))


def _grytczuk(k: int) -> RecursionSpec:
    return _build(_conway(k), [1, 1])


_FIXED_PRESETS: dict[str, Callable[[], RecursionSpec]] = {
    "conolly": lambda: _build(_homogeneous([0, 1, 1, 2]), [1, 1]),
    "conway": lambda: _build(_conway(1), [1, 1]),
    "q": lambda: _build(_homogeneous([0, 1, 0, 2]), [1, 1]),
    "v": lambda: _build(_homogeneous([0, 1, 0, 4]), [1, 1, 1, 1]),
    "mu": lambda: _build(_homogeneous([1, 2, 2, 1]), [1, 1, 1]),
}

_PARAM_PRESETS: dict[str, tuple[Callable[[int], RecursionSpec], int]] = {
    "newman": (_newman, 2),
    "grytczuk": (_grytczuk, 2),
}


def preset_names() -> list[str]:
    """Return the recognized preset names (parameterized ones without argument)."""
    return sorted([*_FIXED_PRESETS, *_PARAM_PRESETS])


def _parse_int(token: str) -> int:
    """Parse a nonnegative decimal integer token."""
    stripped = token.strip()
    if not _INT_RE.match(stripped):
        raise SpecParseError("expected a nonnegative integer", token=token)
    return int(stripped)


def _parse_int_list(text: str) -> list[int]:
    """Parse a comma-separated list of nonnegative integers ("" is empty)."""
    if not text.strip():
        return []
    return [_parse_int(part) for part in text.split(",")]


def spec_from_json(obj: Mapping[str, Any]) -> RecursionSpec:
    """Build a spec from its JSON object form.

    Args:
        obj: Mapping with ``family`` ("homog" or "conway"), ``params`` or ``k``, and ``ic``.

    Returns:
        The corresponding RecursionSpec.

    Raises:
        SpecParseError: If the family or a field is malformed.
        SpecArityError: If homogeneous params are not pairs.
        SpecValidationError: If initial conditions are empty or not positive.
    """
    family = obj.get("family")
    ic_raw = obj.get("ic", [])
    if not isinstance(ic_raw, list) or not all(isinstance(v, int) for v in ic_raw):
        raise SpecParseError("ic must be a list of integers", token=str(ic_raw))
    if family == "homog":
        params = obj.get("params", [])
        if not isinstance(params, list) or not all(isinstance(v, int) for v in params):
            raise SpecParseError("params must be a list of integers", token=str(params))
        return _build(_homogeneous(params), ic_raw)
    if family == "conway":
        k = obj.get("k", 1)
        if not isinstance(k, int):
            raise SpecParseError("k must be an integer", token=str(k))
        return _build(_conway(k), ic_raw)
    raise SpecParseError("unknown family", token=str(family))


def _parse_explicit(head: str, body: str) -> RecursionSpec:
    """Parse ``homog:...;ic=...`` or ``conway:k;ic=...`` (head already lowercased)."""
    params_text, sep, ic_part = body.partition(";")
    if not sep:
        raise SpecParseError("missing ';ic=' section", token=body)
    key, eq, ic_text = ic_part.partition("=")
    if not eq or key.strip().lower() != "ic":
        raise SpecParseError("expected 'ic=' after ';'", token=ic_part)
    ic = _parse_int_list(ic_text)
    if head == "homog":
        return _build(_homogeneous(_parse_int_list(params_text)), ic)
    return _build(_conway(_parse_int(params_text)), ic)


def parse_spec(text: str) -> RecursionSpec:
    """Parse a preset name, an explicit spec string, or a JSON object.

    Args:
        text: e.g. ``conolly``, ``newman:3``, ``homog:0,1,1,2;ic=1,1``, ``conway:2;ic=1,1``
            or ``{"family": "conway", "k": 2, "ic": [1, 1]}``.

    Returns:
        The corresponding RecursionSpec.

    Raises:
        SpecParseError: If the text is malformed (names the offending token).
        SpecArityError: If a homogeneous parameter list has odd length.
        SpecValidationError: If initial conditions are empty or not positive.
    """
    stripped = text.strip()
    if not stripped:
        raise SpecParseError("empty spec", token=text)
    for ch in stripped:
        if not ch.isascii():
            raise SpecParseError("spec text must be ASCII", token=ch)

    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            snippet = exc.doc[exc.pos : exc.pos + 10]
            raise SpecParseError("invalid JSON spec", token=snippet) from None
        if not isinstance(obj, dict):
            raise SpecParseError("JSON spec must be an object", token=stripped)
        return spec_from_json(obj)

    head, colon, body = stripped.partition(":")
    name = head.strip().lower()

    if name in ("homog", "conway") and ";" in body:
        return _parse_explicit(name, body)

    if name in _FIXED_PRESETS:
        if colon:
            raise SpecParseError(f"preset {name!r} takes no parameter", token=body)
        return _FIXED_PRESETS[name]()

    if name in _PARAM_PRESETS:
        builder, default = _PARAM_PRESETS[name]
        value = _parse_int(body) if colon else default
        return builder(value)

    if name == "homog":
        raise SpecParseError("missing ';ic=' section", token=body)
    raise SpecParseError("unknown preset or family", token=head)
