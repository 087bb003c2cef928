import setuptools


with open("requirements.txt", "r") as f:
    requirements = f.read().splitlines()

with open("test_requirements.txt", "r") as f:
    test_requirements = f.read().splitlines()

with open("README.md", "r", encoding="utf-8") as fh:
    LONG_DESCRIPTION = fh.read()

setuptools.setup(
    name="knotstat",
    version="0.1.0",
    license="MIT",
    description="Statistics and small neural networks relating Jones polynomials to hyperbolic knot invariants",
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    install_requires=requirements,
    tests_require=test_requirements,
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={"knotstat": ["data/*.csv"]},
    entry_points={"console_scripts": ["knotstat = knotstat.cli:main"]},
    python_requires=">=3.7",
    classifiers=[
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    extras_require={},
)
