#!/usr/bin/env python
from setuptools import setup

setup(
    name='grpcert',
    version="0.3.0",
    description="Certifies free actions of finite p-groups on products of spheres by exact character and chain "
                "complex computations.",
    author='Paul Scherrer Institute',
    requires=["numpy", 'sympy'],
    install_requires=["numpy", "sympy"],
    packages=['grpcert',
              "grpcert.group",
              "grpcert.character",
              "grpcert.construction",
              "grpcert.complex",
              "grpcert.interface"],
    entry_points={"console_scripts": ["grpcert = grpcert.interface.cli:main"]}
)
