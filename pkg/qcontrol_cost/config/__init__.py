"""
Configuration and initialization for qcontrol-cost

This package provides:
- settings: Configuration management from env vars, .env files, and arguments
- initialization: Project setup with example models and a results folder
"""

from .settings import (
    QccConfig,
    ConfigLoader,
    load_config,
    get_default_config,
    get_global_config,
    set_global_config,
    print_config_info
)

from .initialization import ProjectInitializer

__all__ = [
    'QccConfig',
    'ConfigLoader',
    'load_config',
    'get_default_config',
    'get_global_config',
    'set_global_config',
    'print_config_info',
    'ProjectInitializer'
]
