from setuptools import setup

setup_args = {
    'zip_safe': False,
    'license': "Apache License 2.0",
    'description': "Numerical laboratory for nonlocal Kirchhoff problems",
    'keywords': ["Kirchhoff", "Nehari", "Trudinger-Moser", "finite differences",
                 "variational methods"],
    'install_requires': ['numpy >= 1.17', 'scipy >= 1.4', 'cffi >= 1.0'],
    'tests_require': ['nose2'],
    'test_suite': 'tests',
    'python_requires': '>=3.6',

    'classifiers': [
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],

    'packages': ['kirchlab'],
    'entry_points': {
        'console_scripts': ['kirchlab = kirchlab.cli:main']
    },
    'name': 'kirchlab',
    'version': '0.1.0',
}

setup(**setup_args)
