from fastapi import HTTPException, status

from app.engine.catalog import PRESETS, Preset


def get_preset_entry(key: str) -> Preset:
    preset = PRESETS.get(key)
    if preset is None:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail={"code": "unknown_preset", "message": f"unknown preset {key!r}"},
        )
    return preset
