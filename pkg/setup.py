from setuptools import setup

metadata = dict(
    name="confball",
    version="0.1.0",
    author="alienkrieg",
    author_email="alienkrieg@gmail.com",
    description="Nonasymptotic Euclidean confidence balls for Gaussian means",
    packages=[
        "confball",
        "confball.bounds",
        "confball.core",
        "confball.distributions",
        "confball.models",
        "confball.radii",
        "confball.sim",
        "confball.varselect",
    ],
    long_description=open("README.md").read(),
    install_requires=[
        "numpy >= 1.19.2",
        "numba >= 0.52.0",
        "scipy >= 1.8.0",
        "pandas >= 1.5.0",
    ],
    entry_points={
        "console_scripts": ["confball = confball.cli:main"],
    },
    python_requires=">=3.9, <3.12",
)

if __name__ == "__main__":
    setup(**metadata)
