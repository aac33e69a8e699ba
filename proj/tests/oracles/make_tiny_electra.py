# Copyright 2026 The bnhate Authors. All Rights Reserved.
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

"""Builds a tiny randomly initialised ELECTRA encoder in the on-disk layout the
pretrained backend reads, plus reference token ids and hidden states computed
with transformers.

usage: make_tiny_electra.py OUT_DIR
"""

import json
import pathlib
import sys

import torch
from transformers import BertTokenizer, ElectraConfig, ElectraModel

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
WORDS = ["আমি", "তুমি", "ভাল", "খারাপ", "না", "বাংলা", "দেশ", "মানুষ", "কথা", "এই",
         "##টা", "##র", "##কে", "##ে", "##ি", "।", "!", "?", ",", "শতাংশ", "১০০", "২৫",
         "a", "b", "##c", "hello", "##lo", "he", "##l"]

TEXTS = [
    "আমি ভাল মানুষ।",
    "এইটা খারাপ কথা!",
    "বাংলাদেশ দেশ",
    "hello আমি ২৫ শতাংশ",
    "অচেনা শব্দ",
    "",
    " ".join(["তুমি"] * 20),
]


def main():
    out = pathlib.Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(7)
    vocab = SPECIALS + WORDS
    (out / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    (out / "tokenizer_config.json").write_text(json.dumps({"do_lower_case": False}))
    cfg = ElectraConfig(vocab_size=len(vocab), embedding_size=6, hidden_size=8, num_hidden_layers=2,
                        num_attention_heads=2, intermediate_size=12, max_position_embeddings=32,
                        type_vocab_size=2, hidden_act="gelu", layer_norm_eps=1e-12)
    model = ElectraModel(cfg).double().eval()
    with torch.no_grad():
        for p in model.parameters():
            p.normal_(0.0, 0.3)
    model.float().save_pretrained(out, safe_serialization=True)
    model.double()
    for stale in ("generation_config.json",):
        (out / stale).unlink(missing_ok=True)

    tok = BertTokenizer(str(out / "vocab.txt"), do_lower_case=False)
    cases = []
    for text in TEXTS:
        enc = tok(text, truncation=True, max_length=16)
        ids = torch.tensor([enc["input_ids"]])
        with torch.no_grad():
            hidden = model(input_ids=ids, token_type_ids=torch.zeros_like(ids)).last_hidden_state[0]
        cases.append({"text": text, "ids": enc["input_ids"],
                      "hidden": [[float(v) for v in row] for row in hidden]})
    ref = {"max_length": 16, "cases": cases}
    (out.parent / "tiny_electra_reference.json").write_text(json.dumps(ref, ensure_ascii=False, indent=1),
                                                            encoding="utf-8")


if __name__ == "__main__":
    main()
