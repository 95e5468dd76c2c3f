#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
import sys

from osscp.cli import main

sys.exit(main())
