from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix='MANNHEIM_')

    TOOL_VERSION: str = '1.0.0'
    DEFAULT_TOL: float = 1e-4

    # Geometry thresholds
    KAPPA_MIN: float = 1e-8
    SPEED_MIN: float = 1e-9
    PARTNER_SPEED_MIN: float = 1e-6
    ARC_EPS: float = 1e-3
    ORTHONORMAL_TOL: float = 1e-10
    SPATIAL_TOL: float = 1e-12

    # Target arc-length step of the frame stencils on sampled curves
    FD_STEP: float = 0.05
    # Arc-length step for differencing extracted curvature and angle series
    SERIES_FD_STEP: float = 0.2

    # Pair verification
    MIN_COVERAGE: float = 0.9
    COS_THETA_GUARD: float = 1e-3

    CSV_FLOAT_FORMAT: str = '%.17g'
    LOG_LEVEL: str = 'WARNING'

settings = Settings()
