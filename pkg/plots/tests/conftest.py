import os

# Pin the SVG metadata timestamp so repeated renders are byte-identical.
os.environ.setdefault("SOURCE_DATE_EPOCH", "0")
