# Copyright 2026 The robustlimit Authors
# SPDX-License-Identifier: Apache-2.0
import os
import shutil

import pytest


@pytest.fixture
def cli():
    path = os.environ.get("ROBUSTLIMIT_CLI") or shutil.which("robustlimit")
    if not path:
        pytest.skip("robustlimit CLI not available")
    return path
