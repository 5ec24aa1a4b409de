#!/usr/bin/env python
# Print the default run configuration in the key = value format. The output
# is a complete, valid configuration file.
from kirchlab.config import RunConfig

print(RunConfig().dumps(), end='')
