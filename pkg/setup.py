from setuptools import setup, find_packages

with open('requirements.txt') as f:
    required = f.read().splitlines()

setup(
    name='cusplab',
    version='0.1.1',
    packages=find_packages(exclude=['tests']),
    description='The `cusplab` package checks, with exact cyclotomic arithmetic, the finite-group and Satake-parameter identities behind the reducibility of exterior squares of 4-dimensional representations.',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    license='MIT',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.10',
    install_requires=required,
    package_data={'cusplab': ['catalog_data/*.json']},
    include_package_data=True,
    entry_points={'console_scripts': ['cusplab=cusplab.cli:main']},
)
