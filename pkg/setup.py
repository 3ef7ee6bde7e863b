#!/bin/python
from os import path

import setuptools

this_directory = path.abspath(path.dirname(__file__))

with open(path.join(this_directory, "README.md"), "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="pygaugecheck",
    version="0.1.0",
    description="Verify Poisson and quantum gauge-transformation conditions on matrix groups",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires='>=3.10',
    install_requires=[
        "numpy",
        "scipy",
        "propcache",
    ],
    entry_points={
        "console_scripts": ["gaugecheck = gaugecheck.cli:main"],
    },
)
