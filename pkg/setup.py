# -*- coding: utf-8 -*-

from setuptools import find_packages, setup

# To publish :
# python3 -m pip install --upgrade build twine
# python3 -m build
# python3 -m twine upload --repository pypi dist/*


setup(
    name='wlalign',
    version='0.1.0',
    description='Across-network Weisfeiler-Lehman relabeling and regularized representation learning for network alignment.',
    long_description='wlalign aligns the nodes of two networks from a few known anchor pairs: '
                     'labels are propagated across the networks with a soft or hard WL relabeling, '
                     'then node embeddings are trained to respect both the labels and the network structure.',
    author='wlalign developers',
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={'wlalign': [
                                'relabel/*.py',
                                'embedding/*.py',
                                'evaluation/*.py'
                             ]},
    keywords="network alignment, anchor link prediction, weisfeiler-lehman, graph embedding",
    python_requires=">=3.8, <4",
    install_requires=[
        "pandas",
        "numpy<2",
        "scipy>=1.8",
        "matplotlib"],
    entry_points={
        "console_scripts": [
            "wlalign=wlalign.cli:main",
        ],
    },
    extras_require={
        'docs-requirements-txt': [
            'sphinx',
            'sphinx_rtd_theme',
            'myst_parser',
            'numpydoc',
        ],
        'tests': [
            'pytest',
            'pytest-cov',
        ]
    }
)
