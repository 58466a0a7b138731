# SPDX-FileCopyrightText: 2025-present PyBackDev <evbalbukova@gmail.com>
#
# SPDX-License-Identifier: MIT
__version__ = "0.1.0"
