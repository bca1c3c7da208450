from pydantic_settings import BaseSettings


class Settings(BaseSettings):
	# Logging
	LOG_LEVEL: str = "INFO"

	# Sweep fan-out (rows are independent, output order is fixed)
	SWEEP_WORKERS: int = 4

	# Second-basis optimizer defaults
	OPTIMIZER_GRID_POINTS: int = 24
	OPTIMIZER_GRID_POINTS_TWO_QUBIT: int = 8
	OPTIMIZER_REFINE_ITERS: int = 60
	OPTIMIZER_TOLERANCE: float = 1e-8

	# Platform Configuration
	PLATFORM_NAME: str = "kd-nonmarkov"
	PLATFORM_VERSION: str = "0.1.0"

	class Config:
		env_file = ".env"
		env_file_encoding = "utf-8"


settings = Settings()
