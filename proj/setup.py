from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = [
    "src/rates.cpp",
    "src/service.cpp",
    "src/sim.cpp",
    "src/bromwich.cpp",
    "src/kernels.cpp",
    "src/estimators.cpp",
    "src/oracle.cpp",
    "src/experiment.cpp",
]

ext = Pybind11Extension(
    "isqest._core",
    sources=["bindings/module.cpp", *core_sources],
    include_dirs=["include", "vendor"],
    cxx_std=20,
    extra_compile_args=["-O2"],
)

setup(
    package_dir={"": "python"},
    packages=["isqest"],
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
)
