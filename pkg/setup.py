from setuptools import setup, find_packages

setup(
    name="gee_evolver",
    version="1.0.0",
    description="广义本征值方程的变分虚时演化求解器",
    author="Your Name",
    packages=find_packages(exclude=["tests", "examples*"]),
    install_requires=[
        "numpy>=1.21.0",
        "scipy>=1.7.0",
        "networkx>=2.6.0",
        "click>=8.0.0",
        "pyyaml>=6.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "gee_evolver=src.main:main",
        ],
    },
    python_requires=">=3.7",
)
