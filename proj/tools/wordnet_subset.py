#!/usr/bin/env python3
"""Cut a self-consistent subset out of a WordNet 3.x database directory.

Every synset of every selected lemma is copied. Pointer lists are dropped
and synset offsets are rewritten to the byte positions in the new data
files, so index.<pos> and data.<pos> stay consistent with each other.

usage: wordnet_subset.py <wordnet-dir> <out-dir> <words-file>

The words file holds lines "noun <lemma>" or "verb <lemma>".
"""
import os
import sys

POS = {"noun": "n", "verb": "v"}


def header(path):
    with open(path, encoding="latin-1") as f:
        return [line for line in f if line.startswith("  ")]


def read_index(path):
    out = {}
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            out[line.split(" ", 1)[0]] = line
    return out


def read_data(path, wanted):
    out = {}
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            off = int(line[:8])
            if off in wanted:
                out[off] = line
    return out


def strip_pointers(fields, verb):
    # fields: offset lex ss w_cnt (word lex_id)* p_cnt ptrs... [frames]
    w_cnt = int(fields[3], 16)
    i = 4 + 2 * w_cnt
    head = fields[1:i]
    p_cnt = int(fields[i])
    rest = fields[i + 1 + 4 * p_cnt:]
    return head + ["000"] + (rest if verb else [])


def main():
    src, dst, words_file = sys.argv[1:4]
    selected = {"noun": [], "verb": []}
    with open(words_file) as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                pos, lemma = line.split()
                selected[pos].append(lemma)
    os.makedirs(dst, exist_ok=True)
    for name, code in POS.items():
        index = read_index(os.path.join(src, "index." + name))
        entries = []
        for lemma in sorted(set(selected[name])):
            if lemma not in index:
                sys.exit("not in WordNet: %s %s" % (name, lemma))
            entries.append(index[lemma].split())
        wanted = set()
        for e in entries:
            n = int(e[2])
            wanted.update(int(x) for x in e[-n:])
        data = read_data(os.path.join(src, "data." + name), wanted)

        out_lines = header(os.path.join(src, "data." + name))
        pos = sum(len(l.encode("latin-1")) for l in out_lines)
        remap = {}
        body = []
        for off in sorted(data):
            line = data[off]
            synset, gloss = line.rstrip("\n").split(" | ", 1)
            fields = strip_pointers(synset.split(), name == "verb")
            text = "%08d %s | %s\n" % (pos, " ".join(fields), gloss.rstrip())
            remap[off] = pos
            body.append(text)
            pos += len(text.encode("latin-1"))
        with open(os.path.join(dst, "data." + name), "w", encoding="latin-1") as f:
            f.writelines(out_lines + body)

        with open(os.path.join(dst, "index." + name), "w", encoding="latin-1") as f:
            f.writelines(header(os.path.join(src, "index." + name)))
            for e in entries:
                n = int(e[2])
                offs = ["%08d" % remap[int(x)] for x in e[-n:]]
                p_cnt = int(e[3])
                sense = e[4 + p_cnt:6 + p_cnt]
                f.write(" ".join([e[0], code, e[2], "0"] + sense + offs) + "  \n")

        keep = set(selected[name])
        with open(os.path.join(src, name + ".exc"), encoding="latin-1") as f:
            exc = [l for l in f if any(b in keep for b in l.split()[1:])]
        with open(os.path.join(dst, name + ".exc"), "w", encoding="latin-1") as f:
            f.writelines(exc)


if __name__ == "__main__":
    main()
