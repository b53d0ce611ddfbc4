import subprocess

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    try:
        out = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True, text=True, check=True,
        ).stdout
        for tok in out.split():
            if tok.startswith("-I"):
                return tok[2:]
    except Exception:
        pass
    return "/usr/include/eigen3"


ext = Pybind11Extension(
    "hetnet_ee._hetnet",
    sources=[
        "src/special_math.cpp",
        "src/quadrature.cpp",
        "src/network_model.cpp",
        "src/rates.cpp",
        "src/power_energy.cpp",
        "src/monte_carlo.cpp",
        "src/config_io.cpp",
        "src/bindings.cpp",
    ],
    include_dirs=["include", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
