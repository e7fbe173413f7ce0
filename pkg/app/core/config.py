from pydantic import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "Deformed Algebra Representations"
    VERSION: str = "1.0.0"
    API_V1_STR: str = "/api/v1"

    LOG_LEVEL: str = "WARNING"

    # Tolerances for float-mode comparisons
    FLOAT_TOL: float = 1e-10
    ROOT_TOL: float = 1e-10
    SIDE_TOL: float = 1e-8
    ROOT_OF_UNITY_TOL: float = 1e-8

    # Real-axis scan for exponential-polynomial roots
    SCAN_LO: float = -100.0
    SCAN_HI: float = 100.0
    SCAN_STEPS: int = 4096

    # rho ansatz starts at deg(f)+1 and retries this many extra degrees
    RHO_EXTRA_DEGREES: int = 2
    # rounds of b -> b**alpha added to the rho ansatz bases when |alpha| != 1
    RHO_BASE_CLOSURE_STEPS: int = 4
    # rewriting gives up after REWRITE_STEP_FACTOR * 3**len(word) steps
    REWRITE_STEP_FACTOR: int = 10

    DEFAULT_JOBS: int = 1

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
