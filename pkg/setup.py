# Copyright 2024 The lltkde Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import re
from setuptools import setup, find_packages

with open("lltkde/_version.py") as f:
    version = re.search(r'__version__ = "([^"]+)"', f.read()).group(1)

setup(name='lltkde',
    version=version,
    description='lltkde',
    long_description='Local likelihood transformation kernel density estimation for positive data',
    license='Apache-2.0',
    packages=find_packages(),
    package_data={
        "lltkde._tests.fixtures": ['*.csv', '*.json'],
        "lltkde": ["py.typed"],
    },
    python_requires='>=3.8',
    install_requires=[
        "numpy",
        "scipy>=1.9",
        "pandas",
        "filelock",
    ],
    entry_points={
        "console_scripts": [
            "lltkde=lltkde.cli:main",
        ],
    },
)
