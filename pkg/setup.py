import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name='vtflow',
    version='0.1.0',
    author='vtflow contributors',
    description='Numerical laboratory for VT-harmonic map heat flows and their gradient estimates.',
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='MIT',
    packages=['vtflow'],
    python_requires='>=3.9',
    install_requires=['numpy>=1.22', 'scipy>=1.8'],
    extras_require={'test': ['pytest>=7']},
    entry_points={'console_scripts': ['vtflow=vtflow.cli:main']},
)
