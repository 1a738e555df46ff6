# Copyright 2026 The docbot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Document-grounded multi-turn chatbot engine."""

import os as _os

_data = _os.path.join(_os.path.dirname(__file__), "data")
if _os.path.isdir(_data):
    _os.environ.setdefault("DOCBOT_RESOURCE_DIR", _data)

from ._docbot import (  # noqa: E402
    Bot,
    ChitchatModel,
    DocbotError,
    DocumentStore,
    MatcherModel,
    Service,
    evaluate,
    extract_triples,
    generate_corpus,
    gradient_suite,
    preprocess,
    resource_dir,
    train_chitchat,
    train_matcher,
)

__all__ = [
    "Bot",
    "ChitchatModel",
    "DocbotError",
    "DocumentStore",
    "MatcherModel",
    "Service",
    "evaluate",
    "extract_triples",
    "generate_corpus",
    "gradient_suite",
    "preprocess",
    "resource_dir",
    "train_chitchat",
    "train_matcher",
]
