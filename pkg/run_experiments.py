#!/usr/bin/env python
# -*- encoding: utf-8 -*-
'''
@File    :   run_experiments.py
@Desc    :   Run a channel aging scenario from a config file or a preset
'''

import sys

sys.path.append("src")
from channelaging.cli import main


if __name__ == "__main__":
    if len(sys.argv) == 1:
        # no arguments: show what can be run
        sys.exit(main(["list-presets"]))
    sys.exit(main())
