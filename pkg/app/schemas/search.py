from typing import Tuple

from pydantic import BaseModel, root_validator, validator

from app.core.config import settings


class RootSearchConfig(BaseModel):
    real_interval: Tuple[float, float] = (settings.SCAN_LO, settings.SCAN_HI)
    scan_steps: int = settings.SCAN_STEPS
    root_tol: float = settings.ROOT_TOL
    side_tol: float = settings.SIDE_TOL
    want_complex: bool = False

    @validator("real_interval")
    def interval_is_ordered(cls, v):
        lo, hi = v
        if not lo < hi:
            raise ValueError("real_interval needs lo < hi")
        return v

    @validator("scan_steps")
    def enough_steps(cls, v):
        if v < 2:
            raise ValueError("scan_steps must be at least 2")
        return v

    @root_validator(skip_on_failure=True)
    def tolerances_positive(cls, values):
        if values["root_tol"] <= 0 or values["side_tol"] <= 0:
            raise ValueError("tolerances must be positive")
        return values

    class Config:
        allow_mutation = False
