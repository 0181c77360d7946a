#!/usr/bin/env python3
"""Build the 50-pair metric fixture and a bootstrap golden file.

Expected values are computed with the independent test oracles (full
matrix DP, memoized LCS, explicit n-gram pools) rather than the library,
then frozen to 6 decimals. The oracle regeneration package later rewrites
golden_metrics.json adding reference-implementation scores; expected
values must not change.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import (  # noqa: E402
    oracle_bleu4,
    oracle_edit_distance_norm,
    oracle_exact_match,
    oracle_meteor_greedy,
    oracle_rouge_l,
)

PAIRS: list[tuple[str, str]] = [
    # identical
    ("Get-Process", "Get-Process"),
    ('Get-ADGroupMember -Identity "Admins"', 'Get-ADGroupMember -Identity "Admins"'),
    (
        "Get-Service | Where-Object {$_.Status -eq 'Running'}",
        "Get-Service | Where-Object {$_.Status -eq 'Running'}",
    ),
    ("whoami", "whoami"),
    ("Get-NetTCPConnection -State Listen", "Get-NetTCPConnection -State Listen"),
    (
        "Invoke-WebRequest -Uri http://files.internal/tool.zip -OutFile tool.zip",
        "Invoke-WebRequest -Uri http://files.internal/tool.zip -OutFile tool.zip",
    ),
    (
        "Get-CimInstance Win32_OperatingSystem | Select-Object Caption",
        "Get-CimInstance Win32_OperatingSystem | Select-Object Caption",
    ),
    ("$PSVersionTable", "$PSVersionTable"),
    # single-token substitutions
    ('Get-ADGroupMember -Identity "Admins"', 'Get-ADGroupMember -Identity "Users"'),
    ("Stop-Service -Name Spooler", "Stop-Service -Name BITS"),
    ("Get-EventLog -LogName System -Newest 5", "Get-EventLog -LogName Security -Newest 5"),
    ("Get-FileHash -Algorithm SHA256 tool.zip", "Get-FileHash -Algorithm MD5 tool.zip"),
    ("Copy-Item report.txt -Destination C:\\staging", "Move-Item report.txt -Destination C:\\staging"),
    ("Resolve-DnsName example.internal", "Resolve-DnsName example.external"),
    ("Get-Content C:\\logs\\audit.log", "Get-Content C:\\logs\\error.log"),
    ("New-Item -ItemType Directory -Path C:\\logs", "New-Item -ItemType File -Path C:\\logs"),
    # generated appends surplus stages
    ("Get-Process", "Get-Process | Out-File C:\\temp\\procs.txt"),
    ("Get-Service", "Get-Service | Export-Csv services.csv"),
    ("whoami", "whoami; hostname"),
    ("Get-Date", "Get-Date -Format o"),
    ("Get-LocalUser", "Get-LocalUser | Select-Object Name, Enabled"),
    ("Get-ChildItem C:\\Temp", "Get-ChildItem C:\\Temp -Recurse -Force"),
    # generated truncates
    (
        "Get-Process | Sort-Object CPU -Descending | Select-Object -First 3",
        "Get-Process | Sort-Object CPU",
    ),
    ("Get-WinEvent -LogName Security -MaxEvents 10", "Get-WinEvent -LogName Security"),
    ("Test-Connection -ComputerName localhost -Count 1", "Test-Connection localhost"),
    ("Get-ScheduledTask -TaskPath \\ | Select-Object TaskName", "Get-ScheduledTask"),
    ("Start-Sleep -Seconds 5; Get-Date", "Get-Date"),
    ("Get-NetIPConfiguration -Detailed", "Get-NetIPConfiguration"),
    # reorderings
    ("Select-Object Name, CPU, Id", "Select-Object Id, CPU, Name"),
    ("Copy-Item -Path a.txt -Destination b.txt", "Copy-Item -Destination b.txt -Path a.txt"),
    ("one two three four", "four three two one"),
    ("alpha beta gamma delta", "alpha delta gamma beta"),
    # wrong answers
    ("Get-Process", "netstat -ano"),
    ("Get-Service Spooler", "systemctl status cups"),
    ("Get-Random -Maximum 10", "echo hello world"),
    ("Get-Culture", "locale"),
    ("alpha beta", "gamma delta epsilon"),
    # whitespace variants
    ("Get-Process  -Name   pwsh", "Get-Process -Name pwsh"),
    ("Get-Date", "  Get-Date  "),
    ("Write-Output 'a  b'", "Write-Output 'a b'"),
    ("a\tb", "a b"),
    # case variants
    ("Get-Process", "get-process"),
    ("STOP-SERVICE -Name Spooler", "Stop-Service -Name Spooler"),
    ("Get-Date -Format YYYY", "Get-Date -format yyyy"),
    # inflection variants
    ("stop running services", "stopped running service"),
    ("list the failed connections", "listing the failing connection"),
    ("remove temporary files quickly", "removing temporary file quick"),
    # longer realistic lines
    (
        "powershell.exe -c \"[System.Convert]::FromBase64String('Q21k')\"",
        "powershell.exe -NoProfile -c \"[System.Convert]::FromBase64String('Q21k')\"",
    ),
    (
        "Get-Process | Where-Object {$_.CPU -gt 10} | Stop-Process -Force",
        "Get-Process | Where-Object {$_.CPU -gt 50} | Stop-Process",
    ),
    (
        "Get-ChildItem -Path C:\\Users -Include *.docx -Recurse | Copy-Item -Destination C:\\staging",
        "Get-ChildItem -Path C:\\Users -Include *.pdf -Recurse | Copy-Item -Destination D:\\staging",
    ),
]


def main() -> None:
    assert len(PAIRS) == 50, len(PAIRS)
    pairs_path = ROOT / "fixtures" / "metric_pairs.jsonl"
    lines = []
    golden_pairs = []
    for i, (ref, gen) in enumerate(PAIRS, start=1):
        pid = f"pair-{i:03d}"
        lines.append(json.dumps({"pair_id": pid, "reference": ref, "generated": gen},
                                ensure_ascii=False) + "\n")
        expected = {
            "ed": round(oracle_edit_distance_norm(ref, gen), 6),
            "meteor": round(oracle_meteor_greedy(ref, gen), 6),
            "rouge_l": round(oracle_rouge_l(ref, gen), 6),
            "bleu4": round(oracle_bleu4(ref, gen), 6),
            "exact_match": round(float(oracle_exact_match(ref, gen)), 6),
        }
        golden_pairs.append(
            {"pair_id": pid, "reference": ref, "generated": gen, "expected": expected}
        )
    pairs_path.write_text("".join(lines), encoding="utf-8")
    print(f"wrote {pairs_path}")

    golden = {
        "header": {
            "generator_version": "bootstrap-oracle-1",
            "scorer_versions": {},
            "pair_count": len(golden_pairs),
        },
        "pairs": golden_pairs,
    }
    golden_path = ROOT / "fixtures" / "golden_metrics.json"
    golden_path.write_text(
        json.dumps(golden, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {golden_path}")


if __name__ == "__main__":
    main()
