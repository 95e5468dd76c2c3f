#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
