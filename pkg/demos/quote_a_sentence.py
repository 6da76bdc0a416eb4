"""Sign a sentence once, then quote a few words from it and check the quote."""

from quotesig import IndexSet, keygen, quote, render_quote, sign, tokenize, verify

keys = keygen()
text = "The quick brown fox jumps over the dog"
message = tokenize(text)

# one classical signature, computed over the Merkle root of all eight words
message_sig = sign(message, keys.secret)
print(f"signed {message_sig.n} tokens with {message_sig.scheme_id}")

# anyone holding the message and its signature can quote without the secret key
for selection in (IndexSet.span(0, 2), IndexSet.from_indices([4]), IndexSet.from_indices([0, 2, 4])):
    q = quote(message, selection, message_sig)
    words = [message[i] for i in selection]
    report = verify(words, q, keys.public)
    shown = render_quote(words, report.gaps).decode()
    print(f"{shown!r:40} path={len(q.path)} hashes  valid={report.valid}")

# changing a quoted word breaks the signature
q = quote(message, IndexSet.span(0, 2), message_sig)
print("edited quote valid:", verify([b"The", b"slow"], q, keys.public).valid)
