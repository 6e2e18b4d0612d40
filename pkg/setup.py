"""
setup.py for gltforge
"""

from codecs import open
from os import path
from setuptools import setup, find_packages


# To use a consistent encoding
here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(

    name='gltforge',

    # Versions should comply with PEP 440:
    # https://www.python.org/dev/peps/pep-0440/
    version='1.0.0',

    description='Generalised Legendre transform, spectral curves and '
                'hyperkahler checks.',  # Required

    long_description=long_description,  # Optional

    long_description_content_type='text/markdown',  # Optional

    author='gltforge developers',  # Optional

    classifiers=[  # Optional
        'Development Status :: 4 - Beta',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',

        'License :: OSI Approved :: Apache Software License',

        'Programming Language :: Python :: 3',
    ],

    keywords='hyperkahler twistor spectral-curve legendre-transform '
             'nahm lax',  # Optional

    packages=find_packages(exclude=['contrib', 'docs', 'tests']),  # Required

    python_requires='>=3.7',

    # Runtime stack: numerical arrays, quadrature rules / assignment / RK
    # stepping, symbolic closed terms, config validation.
    install_requires=[
        'numpy',
        'scipy',
        'sympy',
        'jsonschema',
    ],

    extras_require={  # Optional
        'dev': ['check-manifest'],
        'test': ['coverage', 'pytest', 'pytest-cov'],
    },

    # The experiment config schema is read at run time.
    package_data={
        'gltforge': ['schemas/*.json'],
        'gltforge.test': ['configs/*.json'],
    },

    data_files=[],  # Optional

    entry_points={
        'console_scripts': [
            'gltforge=gltforge.cli:main',
        ],
    },
)
