from setuptools import find_packages, setup

with open("requirements.txt", "r", encoding="utf-8") as f:
    requirements = [line.split("#")[0].strip() for line in f if line.split("#")[0].strip()]

setup(
    name="flat-witness",
    version="0.1.0",
    description="Short presentations of finite groups and separating identities for their flat extensions",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={"console_scripts": ["flat-witness = flat_witness.main:main"]},
)
