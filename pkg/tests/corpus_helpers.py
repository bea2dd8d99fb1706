from reesalg.cli import CORPUS_DIR, build_presentation, load_job


def corpus_job(name):
    return load_job(CORPUS_DIR / f"{name}.json")


def corpus_presentation(name, field=None):
    """(Presentation, certified minimal primes or None) of a shipped corpus job."""
    return build_presentation(corpus_job(name), field)
