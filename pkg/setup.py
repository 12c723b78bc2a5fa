import os
from setuptools import setup


def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


setup(
    name='fathom',
    version='0.1.0',
    description='Polynomial invariants and cube-complex homology of fatgraphs.',
    long_description=read('README.rst'),
    license='MIT',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    packages=['fathom', 'fathom.tests'],
    package_data={
        'fathom': ['resources/*'],
        'fathom.tests': ['input/*'],
    },
    scripts=['bin/fathom'],
    install_requires=read('requirements.txt').splitlines(),
)
