from redshell_eval.porter import stem


def test_classic_vectors():
    vectors = {
        "caresses": "caress",
        "ponies": "poni",
        "ties": "ti",
        "caress": "caress",
        "cats": "cat",
        "feed": "feed",
        "agreed": "agre",
        "plastered": "plaster",
        "bled": "bled",
        "motoring": "motor",
        "sing": "sing",
        "conflated": "conflat",
        "troubled": "troubl",
        "sized": "size",
        "hopping": "hop",
        "tanned": "tan",
        "falling": "fall",
        "hissing": "hiss",
        "failing": "fail",
        "filing": "file",
        "happy": "happi",
        "sky": "sky",
        "relational": "relat",
        "conditional": "condit",
        "rational": "ration",
        "electrical": "electr",
        "processes": "process",
        "generalization": "gener",
        "adjustable": "adjust",
        "controlling": "control",
    }
    for word, expected in vectors.items():
        assert stem(word) == expected, word


def test_short_words_untouched():
    assert stem("is") == "is"
    assert stem("a") == "a"
    assert stem("") == ""


def test_lowercases():
    assert stem("Stopped") == "stop"


def test_non_alpha_tokens_pass_through_rules():
    # Command-ish tokens should not crash and stay recognizable.
    assert stem("Get-Process") == "get-process"
    assert stem("-Identity") == "-ident"  # treated as a plain character string
