from setuptools import find_packages, setup

with open("mppencode/__init__.py", "r") as f:
    for line in f:
        if line.startswith("__version__"):
            version = line.strip().split("= ")[1].strip('"')
            break

try:
    long_description = open("README.md", "r").read()
except Exception:
    long_description = "MPP encoding... failed to read README.md"

setup(
    name="mppencode",
    version=version,
    description="Multi-point proximity encodings of vector geometries.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    keywords=[
        "geometry",
        "gis",
        "encoding",
        "machine learning",
        "spatial",
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: GIS",
    ],
    python_requires=">=3.9",
    install_requires=["numpy>=1.20", "scipy>=1.11"],
    extras_require={
        "cli": ("appdirs", "click>=8.0", "matplotlib>=3.3"),
    },
    tests_require=["pytest"],
    packages=find_packages(exclude=("tests", "tests.*")),
    entry_points={
        "console_scripts": ("mppencode = mppencode.cli:main",),
    },
)
