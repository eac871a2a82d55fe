from setuptools import setup, find_packages

setup(
    name = 'qswarm',
    author = 'qswarm developers',
    description = 'Density-matrix modelling of quantum robotic swarms',
    packages = find_packages(exclude=['tests']),
    package_data = {'qswarm': ['paper_ledger.yml']},
    entry_points={'console_scripts':['qswarm = qswarm.__main__:main'],},
    version = open('VERSION').read().strip(),
    install_requires = [
        'numpy',
        'scipy',
        'pyyaml',
        'pandas',
        'tqdm',
        ],
    zip_safe = False,
    license='BSD-3',
    platforms='Any',
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: BSD License',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Education',
        'Intended Audience :: Developers',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.10',
        ],
)
