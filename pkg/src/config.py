"""Configuration Management for fibgates"""
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=False, extra="ignore")

    app_name: str = "fibgates"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Numerical tolerances
    leakage_tolerance: float = 1e-9
    entangling_tolerance: float = 1e-8
    unitarity_tolerance: float = 1e-8

    # Search Configuration
    search_max_length: int = 7
    search_shards: int = 8
    search_prefix_depth: int = 1
    search_policy: str = "float-filter-then-exact"
    search_output: str = "reports/search_results.jsonl"
    checkpoint_dir: str = "reports/checkpoints"

    # Approximation Configuration
    approx_tol: float = 1e-10
    approx_max_iter: int = 40
    max_word_letters: int = 200_000
    word_window: int = 4096

    # Monitoring Configuration
    metrics_port: Optional[int] = None


settings = Settings()


def get_search_config() -> Dict[str, Any]:
    """Get search defaults"""
    return {
        'max_length': settings.search_max_length,
        'shards': settings.search_shards,
        'prefix_depth': settings.search_prefix_depth,
        'policy': settings.search_policy,
        'output': settings.search_output,
        'checkpoint_dir': settings.checkpoint_dir,
    }


def get_approximation_config() -> Dict[str, Any]:
    """Get approximation defaults"""
    return {
        'tol': settings.approx_tol,
        'max_iter': settings.approx_max_iter,
        'max_word_letters': settings.max_word_letters,
        'word_window': settings.word_window,
    }


def load_yaml_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a YAML mapping of option overrides"""
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a mapping, got {type(data).__name__}")
    return data
