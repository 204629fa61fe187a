import os
import platform
import codecs
from setuptools import setup

if platform.system() != "Windows":
    readme_path = os.path.join(os.path.dirname(__file__), 'README.rst')
    with codecs.open(readme_path, encoding='utf8') as f:
        readme = f.read()
else:
    # The format is messed up with extra line breaks when building wheels on windows.
    # Skip readme in this case.
    readme = "Hypergeometric functions F_{L,N}, their Pfaffian systems and Hamiltonian structure."

setup(
    name='hgflow',
    description='Hypergeometric functions F_{L,N}, Pfaffian systems and isomonodromic Hamiltonians',
    long_description=readme,
    long_description_content_type='text/x-rst',
    license='MIT',
    py_modules=['_hgflow_version'],
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    install_requires=['numpy>=1.20', 'scipy>=1.7', 'pyrsistent>=0.19'],
    extras_require={'test': ['pytest', 'hypothesis', 'jsonschema']},
    entry_points={'console_scripts': ['hgflow=hgflow._cli:main']},
    packages=['hgflow'],
    package_data={'hgflow': ['report_schema.json']},
    python_requires='>=3.8',
)
