from typing import Any, Dict, List

from fastapi import APIRouter, Depends

from app.api.deps import get_preset_entry
from app.engine.catalog import Preset, list_presets

router = APIRouter()


@router.get("/", response_model=List[Dict[str, Any]], summary="List preset algebras")
def read_presets() -> Any:
    """
    All preset algebras with their required parameters and the closed form
    of Phi they are checked against.
    """
    return list_presets()


@router.get("/{key}", response_model=Dict[str, Any], summary="Describe one preset")
def read_preset(preset: Preset = Depends(get_preset_entry)) -> Any:
    return preset.describe()
