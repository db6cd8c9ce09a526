from setuptools import setup, find_packages

setup(
    name="lr-rfim-toolkit",
    version="1.0.0",
    description="长程随机场 Ising 模型验证工具包 - 用于一维平衡过程、二维轮廓粗粒化与无序模拟的数值验证",
    author="LR-RFIM Toolkit Team",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pyyaml>=6.0",
        "pandas>=2.0.0",
        "openpyxl>=3.1.0",
    ],
    extras_require={
        "test": ["hypothesis>=6.80.0"],
    },
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
