"""
Project initialization for qcontrol-cost

``qcc-init`` lays out a working directory:

    models/    the bundled example model files, ready to edit
    results/   default destination for CSV tables and SVG plots
    .env       commented template of the QCC_* settings
"""
import logging
from pathlib import Path
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

ENV_TEMPLATE = """# qcontrol-cost configuration
# Values here are read by the qcc command and by load_config()

# Worker threads for parameter sweeps (default: all cores)
# QCC_THREADS=4

# Hermitian eigensolver: lapack or jacobi
# QCC_EIG_METHOD=lapack

# Eigenvalue floor below which a state counts as support-deficient
# QCC_EIG_FLOOR=1e-14

# Logging
# QCC_LOG_LEVEL=WARNING
# QCC_VERBOSE=false
# QCC_DEBUG=false
# QCC_COLORIZE=true

# Where CSV/SVG results are written when --output is relative
# QCC_OUTPUT_DIR=results
"""

PROJECT_FOLDERS = {
    "models": "JSON model files (Hamiltonian, dissipators, targets)",
    "results": "CSV tables and SVG plots written by qcc",
}


class ProjectInitializer:
    """Creates the model and results folders and the configuration template"""

    def __init__(self, project_root: str = "."):
        self.project_root = Path(project_root).resolve()
        self.standard_folders = dict(PROJECT_FOLDERS)

    def _relative(self, path: Path) -> str:
        return str(path.relative_to(self.project_root))

    def _write(self, path: Path, text: str, force: bool, results: Dict[str, Any]) -> None:
        if path.exists() and not force:
            results["existing_files"].append(self._relative(path))
            return
        path.write_text(text)
        results["created_files"].append(self._relative(path))

    def initialize_project(self, force: bool = False) -> Dict[str, Any]:
        """
        Create folders, model files and .env under the project root

        Existing model files and .env are kept unless ``force`` is set. Folder
        READMEs are only written into folders this call creates.

        Returns:
            dict with success, created_folders, created_files, existing_files, errors
        """
        results: Dict[str, Any] = {
            "success": True,
            "created_folders": [],
            "created_files": [],
            "existing_files": [],
            "errors": [],
        }

        try:
            for folder, description in self.standard_folders.items():
                path = self.project_root / folder
                if path.exists():
                    continue
                path.mkdir(parents=True)
                results["created_folders"].append(folder)
                self._write(path / "README.md", f"# {folder.title()}\n\n{description}\n", True, results)

            self._write(self.project_root / ".env", ENV_TEMPLATE, force, results)

            from ..examples import get_example_model_text, list_examples

            models = self.project_root / "models"
            for name in list_examples():
                self._write(models / f"{name}.json", get_example_model_text(name), force, results)
        except OSError as e:
            logger.error("Initialization of %s failed: %s", self.project_root, e)
            results["success"] = False
            results["errors"].append(f"Initialization failed: {e}")

        return results

    def check_project_status(self) -> Dict[str, Any]:
        """Report which folders and files exist, what is missing and what to run next"""
        folders = {}
        missing: List[str] = []
        for folder, description in self.standard_folders.items():
            path = self.project_root / folder
            exists = path.is_dir()
            folders[folder] = {
                "exists": exists,
                "description": description,
                "file_count": sum(1 for _ in path.iterdir()) if exists else 0,
            }
            if not exists:
                missing.append(f"folder: {folder}")

        env_exists = (self.project_root / ".env").exists()
        if not env_exists:
            missing.append("file: .env")

        initialized = all(info["exists"] for info in folders.values())
        recommendations: List[str] = []
        if not initialized:
            recommendations.append("Run 'qcc-init' to set up the project")
        elif folders["models"]["file_count"] <= 1:
            recommendations.append("Run 'qcc-init --force' to restore the example models")

        return {
            "initialized": initialized,
            "folders": folders,
            "files": {".env": {"exists": env_exists, "description": "QCC_ settings"}},
            "missing": missing,
            "recommendations": recommendations,
        }
