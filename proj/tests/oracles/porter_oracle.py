"""Porter (original 1980 algorithm) goldens via NLTK's ORIGINAL_ALGORITHM mode."""
from nltk.stem.porter import PorterStemmer

WORDS = """caresses ponies ties caress cats feed agreed plastered bled motoring sing conflated troubled
sized hopping tanned falling hissing fizzed failing filing happy sky relational conditional rational
valenci hesitanci digitizer conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness formaliti sensitiviti sensibiliti
triplicate formative formalize electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment dependent adoption homologou
communism activate angulariti homologous effective bowdlerize probate rate cease controll roll
dogs men running rides riding women players people children generalization as is a cooking sliced""".split()

s = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
for w in WORDS:
    print('{"%s", "%s"},' % (w, s.stem(w)))
