from pydantic_settings import BaseSettings
from pydantic import field_validator, ValidationError
import sys


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    # Artifacts
    OUTPUT_DIR: str = "runs"

    # Trial dispatch
    CELERY_EAGER: bool = True
    REDIS_HOST: str = "localhost"
    REDIS_PORT: int = 6379
    REDIS_PASSWORD: str | None = None

    # Worker
    WORKER_CONCURRENCY: int = 2
    TRIAL_TIME_LIMIT: int = 3600

    @field_validator('LOG_LEVEL')
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError('Log level must be one of DEBUG, INFO, WARNING, ERROR, CRITICAL')
        return level

    @field_validator('REDIS_PORT')
    @classmethod
    def validate_port(cls, v):
        if not (1 <= v <= 65535):
            raise ValueError('Port must be between 1 and 65535')
        return v

    @field_validator('WORKER_CONCURRENCY', 'TRIAL_TIME_LIMIT')
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('Value must be at least 1')
        return v

    @property
    def broker_url(self) -> str:
        if self.CELERY_EAGER:
            return "memory://"
        auth = f":{self.REDIS_PASSWORD}@" if self.REDIS_PASSWORD else ""
        return f"redis://{auth}{self.REDIS_HOST}:{self.REDIS_PORT}/0"

    @property
    def result_backend(self) -> str:
        if self.CELERY_EAGER:
            return "cache+memory://"
        auth = f":{self.REDIS_PASSWORD}@" if self.REDIS_PASSWORD else ""
        return f"redis://{auth}{self.REDIS_HOST}:{self.REDIS_PORT}/1"

    class Config:
        env_file = ".env"
        case_sensitive = True


def load_settings() -> Settings:
    """Load settings with error handling and validation."""
    try:
        return Settings()
    except ValidationError as e:
        invalid_fields = ['.'.join(str(loc) for loc in error['loc']) for error in e.errors()]
        print(f"Invalid environment configuration: {', '.join(invalid_fields)}", file=sys.stderr)
        print(f"{e}", file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        print(f"Error loading configuration: {e}", file=sys.stderr)
        sys.exit(1)


settings = load_settings()
