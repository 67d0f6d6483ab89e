from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """應用程式設定"""

    # App Settings
    APP_ENV: str = "development"
    LOG_LEVEL: str = "INFO"

    # Reproducibility
    RANDOM_SEED: int = 0
    N_JOBS: int = 1

    # Learners
    N_TREES: int = 100

    # Cross Validation
    CV_FOLDS: int = 5
    CV_REPEATS: int = 2

    # Comparison
    ROPE_PERCENT: float = 1.0
    DIFFICULTY_CUTOFF: float = 0.9
    REFERENCE_METHOD: str = "ICLL+SMOTE(L2)"
    BASELINE_METHOD: str = "NoResample-RF"

    # Output
    OUTPUT_DIR: str = "results"
    MODEL_DIR: str = "models"
    SCALE_FEATURES: bool = False

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()
