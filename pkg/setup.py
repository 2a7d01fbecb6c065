from setuptools import find_packages, setup

# pip install wheel twine
# pip install .[dev]

# python setup.py bdist_wheel sdist
# twine check dist/*

with open("README.rst", "r") as f:
    long_description = f.read()

with open("maglattice/requirements.txt", "r") as f:
    requirements = [line.strip() for line in f if line.strip() and not line.startswith("#")]

setup(
    name="maglattice",
    version="0.1.0",
    description='Trap sites, bands and barriers of permanent-magnet atom-chip lattices.',
    package_dir={"": "."},
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"maglattice": ["configs/*.json", "requirements.txt"]},
    long_description=long_description,
    long_description_content_type="text/x-rst",
    license="Apache 2.0",
    classifiers=[
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3.8",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    install_requires=requirements,
    extras_require={
        "dev": ["pytest>=7.0", "hypothesis>=6.0", "twine>=4.0.2"],
    },
    entry_points={
        "console_scripts": ["maglattice=maglattice.cli:main"],
    },
    python_requires=">=3.8",
)
