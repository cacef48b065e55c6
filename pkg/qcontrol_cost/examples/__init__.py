"""
qcontrol-cost example models

Bundled JSON model files that every `qcc` subcommand accepts. After installation
you can access them programmatically:

```python
from qcontrol_cost.examples import list_examples, get_example_model, load_example

print(list_examples())
path = get_example_model("thermal_qubit")
spec = load_example("two_bath_qubit")
```

## Available Examples

- **thermal_qubit**: qubit damped by one bath; target colder than the bath
- **depolarizing_qubit**: unital noise, steady state I/2
- **two_bath_qubit**: qubit between a hot and a cold bath
- **qutrit_ladder**: explicit jump operators on a three-level ladder
- **thermal_oscillator**: truncated harmonic mode with a thermal bath
- **degenerate_blocks**: two decoupled blocks, no unique steady state
- **qubit_si**: a thermal qubit written in Hz and kelvin
"""

import shutil
from pathlib import Path
from typing import List, Optional


def get_examples_dir() -> Path:
    """Get the examples directory path"""
    return Path(__file__).parent


def list_examples() -> List[str]:
    """List all bundled model names"""
    return sorted(file.stem for file in get_examples_dir().glob("*.json"))


def get_example_model(name: str) -> Optional[Path]:
    """
    Get path to a bundled model file.

    Args:
        name: Name of the example (without extension)

    Returns:
        Path to the model file, or None if not found
    """
    path = get_examples_dir() / f"{name}.json"
    return path if path.exists() else None


def get_example_model_text(name: str) -> str:
    path = get_example_model(name)
    if path is None:
        raise FileNotFoundError(f"No bundled example named '{name}'")
    return path.read_text()


def load_example(name: str):
    """Parse a bundled model into a validated ModelSpecFile"""
    from ..cli.modelspec import parse_model_text

    return parse_model_text(get_example_model_text(name))


def copy_example(name: str, destination: str = ".") -> Optional[Path]:
    """
    Copy an example model to a destination directory.

    Args:
        name: Name of the example to copy
        destination: Destination directory (default: current directory)

    Returns:
        Path to the copied file, or None if source not found
    """
    source = get_example_model(name)
    if not source:
        print(f"❌ Example '{name}' not found")
        return None

    dest_dir = Path(destination)
    dest_dir.mkdir(parents=True, exist_ok=True)
    dest_path = dest_dir / source.name
    shutil.copy2(source, dest_path)

    print(f"✅ Copied {source.name} to {dest_path}")
    return dest_path


__all__ = [
    'get_examples_dir',
    'list_examples',
    'get_example_model',
    'get_example_model_text',
    'load_example',
    'copy_example'
]
