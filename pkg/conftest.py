collect_ignore_glob = ["*__init__.py"]

from pathlib import Path
from pytest import Module

package_loc = Path(__file__).parent

# constraint families carry their tests next to the assembly code
additional_modules = list((package_loc / "fmf_tcs" / "src" / "constraints").glob("*.py"))

def pytest_collect_file(file_path, parent):
    if file_path in additional_modules:
        return Module.from_parent(path=file_path, parent=parent)
    else:
        return None
