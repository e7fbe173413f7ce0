from typing import Any, Dict, List, Optional

from pydantic import BaseModel, root_validator, validator

from app.engine.algebra import AlgebraSpec, ensure_valid
from app.engine.catalog import get_preset
from app.engine.exppoly import ExpPoly
from app.engine.numeric import ScalarMode, parse_scalar


def _check_scalar(value: Any) -> Any:
    # raw JSON form is kept; parse only to reject garbage early
    if value is None:
        return value
    try:
        parse_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a scalar: {value!r}") from exc
    return value


class ExpTermModel(BaseModel):
    coeffs: List[Any]
    base: Any = "1"

    _coeffs_are_scalars = validator("coeffs", each_item=True, allow_reuse=True)(_check_scalar)
    _base_is_scalar = validator("base", allow_reuse=True)(_check_scalar)


class ExpPolyModel(BaseModel):
    terms: List[ExpTermModel] = []

    def to_exppoly(self) -> ExpPoly:
        return ExpPoly.from_json(self.dict())


class AlgebraFile(BaseModel):
    """The on-disk / inline algebra document: s, G, f and named parameters."""

    name: str = "custom"
    mode: Optional[ScalarMode] = None
    s: Any
    G: ExpPolyModel
    f: ExpPolyModel
    params: Dict[str, Any] = {}

    _s_is_scalar = validator("s", allow_reuse=True)(_check_scalar)

    def to_spec(self) -> AlgebraSpec:
        data = self.dict(exclude_none=True)
        if self.mode is not None:
            data["mode"] = self.mode.value
        return AlgebraSpec.from_json(data)


class AlgebraSource(BaseModel):
    """Exactly one of a preset (with params) or an inline algebra document."""

    preset: Optional[str] = None
    params: Dict[str, Any] = {}
    algebra: Optional[AlgebraFile] = None
    mode: Optional[ScalarMode] = None
    float_fallback: bool = False

    @root_validator(skip_on_failure=True)
    def one_source(cls, values):
        if (values.get("preset") is None) == (values.get("algebra") is None):
            raise ValueError("give exactly one algebra source: a preset or an algebra document")
        if values.get("algebra") is not None and values.get("params"):
            raise ValueError("params only apply to presets")
        return values

    def resolve(self, mode: Optional[ScalarMode] = None) -> AlgebraSpec:
        mode = mode or self.mode
        if self.preset is not None:
            return get_preset(self.preset, self.params, mode or ScalarMode.exact)
        spec = self.algebra.to_spec()
        if mode is not None:
            spec = spec.promote(mode)
        return ensure_valid(spec)
