#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
from setuptools import setup


with open("requirements.txt") as f:
    install_requires = [line.strip() for line in f if line.strip()]


setup(name='osscp',
      version='1.0',
      description='Multi-start SCP and operator-splitting SCP for trajectory optimization',
      author='osscp developers',
      packages=['osscp'],
      install_requires=install_requires,
      extras_require={'examples': ['matplotlib>=1.5.3']},
      entry_points={'console_scripts': ['osscp = osscp.cli:main']})
