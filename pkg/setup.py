from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nwpack._core",
                ["src/nwpack/_core.pyx"],
                # -ffp-contract=off: keep float expression results identical
                # to the pure-Python backend (no fused multiply-add)
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython at build time: install the pure-Python package, the
    # fallback backend is selected at import.
    ext_modules = []

setup(ext_modules=ext_modules)
