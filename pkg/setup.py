from setuptools import setup

# Metadata goes in pyproject.toml. These are here for GitHub's dependency graph.

setup(
    name="cliffnet",
    install_requires=["numpy", "scipy", "matplotlib"],
)
