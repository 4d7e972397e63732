"""Starts `serve --port 0` and checks the HTTP endpoints."""

import json
import re
import subprocess
import sys
import urllib.error
import urllib.parse
import urllib.request


def get(base, path, method="GET"):
    req = urllib.request.Request(base + path, method=method)
    try:
        with urllib.request.urlopen(req, timeout=20) as res:
            return res.status, dict(res.headers), res.read()
    except urllib.error.HTTPError as e:
        return e.code, dict(e.headers), e.read()


def main():
    proc = subprocess.Popen([sys.argv[1], "serve", "--port", "0"], stdout=subprocess.PIPE,
                            stderr=subprocess.PIPE, text=True)
    try:
        line = proc.stdout.readline()
        m = re.search(r"listening on (http://\S+)", line)
        if not m:
            print("no listening line:", line, proc.stderr.read() if proc.poll() is not None else "")
            return 1
        base = m.group(1)
        checks = []

        status, headers, body = get(base, "/health")
        checks.append(("health", status == 200 and json.loads(body) == {"status": "ok"}))
        checks.append(("cors", headers.get("Access-Control-Allow-Origin") == "*"))

        q = urllib.parse.quote("list the teaching staff in anna university")
        status, _, body = get(base, f"/api/search?q={q}&k=5")
        results = json.loads(body).get("results", []) if status == 200 else []
        checks.append(("search", status == 200 and 0 < len(results) <= 5))

        status, _, body = get(base, f"/api/expand?q={q}")
        checks.append(("expand", status == 200 and "teaching staff" in json.loads(body)["terms"]))

        status, _, body = get(base, "/api/search?q=")
        checks.append(("empty query", status == 400 and "error" in json.loads(body)))

        status, _, _ = get(base, "/api/search", method="OPTIONS")
        checks.append(("preflight", status == 204))

        for name, ok in checks:
            print(("ok   " if ok else "FAIL ") + name)
        return 0 if all(ok for _, ok in checks) else 1
    finally:
        proc.terminate()
        proc.wait(timeout=10)


if __name__ == "__main__":
    sys.exit(main())
