"""Main entry point for jrcbeam (c.f. `[tool.poetry.scripts]` in `../pyproject.toml`)"""

import jrcbeam.cli.main

jrcbeam.cli.main.main()
