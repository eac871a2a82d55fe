#!/usr/bin/env python
# -*- coding: utf-8 -*-

# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.
