from setuptools import setup, find_packages

with open("README.md") as f:
    long_description = f.read()

setup(
    name="rydberg-ramsey",
    version="0.1.0",
    description="Simulator for storage, Ramsey interferometry and retrieval of slow-light polaritons in a gas with resonant Rydberg dipole-dipole exchange.",
    keywords=["rydberg", "slow light", "eit", "ramsey", "dipole-dipole", "correlation", "simulation"],
    python_requires=">=3.10.5",
    license="MIT",
    install_requires=[
        "numpy>=2.1.3,<3.0.0",
        "scipy>=1.14.1,<2.0.0",
        "pytest-cov>=6.2.1,<7.0.0",
        "python-dotenv>=1.0.1,<2.0.0",
        "setuptools>=58.1.0"
    ],
    packages=find_packages(include=["src", "src.*"], exclude=["tests", "tests.*"]),
    include_package_data=True,
    entry_points={"console_scripts": ["rydberg-ramsey=src.rydberg_ramsey.cli:main"]},
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Physics"
    ],
    long_description=long_description,
    long_description_content_type="text/markdown",
)
