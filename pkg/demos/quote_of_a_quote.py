"""Quote from a quote: the sub-quote needs neither the original message nor the key."""

from quotesig import decode, encode, keygen, quote, sign, subquote, tokenize, verify

keys = keygen()
message = tokenize("Every token in this sentence is covered by one signature over the root")
message_sig = sign(message, keys.secret)

# a journalist quotes the first seven words
first = quote(message, range(7), message_sig)
excerpt = message[:7]
envelope = encode(first)
print("first quote envelope:", len(envelope), "bytes")

# a reader only has the excerpt and its envelope, and trims it further
received = decode(envelope)
second = subquote(excerpt, received, [0, 1, 5, 6], public_key=keys.public)
words = [excerpt[k] for k in (0, 1, 5, 6)]
report = verify(words, second, keys.public)
print("sub-quote:", b" ".join(words).decode(), "| indices", second.indices.format(), "| valid", report.valid)
print("gaps:", [(g.position, g.missing) for g in report.gaps])
