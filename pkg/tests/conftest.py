import random

import pytest

from polyrec.corpus import Document


def make_doc(doc_id, title="", abstract="", controlled=(), authors=(), extra=None):
    return Document(
        doc_id=doc_id,
        title=title,
        abstract=abstract,
        controlled_terms=tuple(controlled),
        authors=tuple(authors),
        extra_entities=extra or {},
    )


VOCAB = [
    "retirement", "health", "pension", "welfare", "aging", "labor",
    "policy", "care", "income", "poverty", "insurance", "reform",
]
AUTHOR_POOL = [
    "hauser, richard", "bäcker, gerhard", "meier, anna", "schmidt, paul",
    "weber, karin", "lorenz, max",
]
CONTROLLED_POOL = [
    "social politics", "elderly people", "health care", "old age",
    "pension scheme",
]
EXTRA_JOURNALS = ["journal of ageing", "welfare quarterly", "policy review"]


def random_document(rng: random.Random, doc_id: str, with_extras=False) -> Document:
    title = " ".join(rng.choices(VOCAB, k=rng.randint(1, 5)))
    abstract = " ".join(rng.choices(VOCAB, k=rng.randint(0, 8)))
    controlled = rng.sample(CONTROLLED_POOL, k=rng.randint(0, 3))
    authors = rng.sample(AUTHOR_POOL, k=rng.randint(0, 3))
    extra = {}
    if with_extras and rng.random() < 0.5:
        extra["journal"] = [rng.choice(EXTRA_JOURNALS)]
    return make_doc(doc_id, title, abstract, controlled, authors, extra)


def random_corpus(seed: int, max_docs: int, with_extras=False) -> list[Document]:
    rng = random.Random(seed)
    count = rng.randint(1, max_docs)
    return [random_document(rng, f"d{i:03d}", with_extras) for i in range(count)]


@pytest.fixture
def tiny_corpus():
    return [
        make_doc(
            "d1",
            title="Retirement and health issues",
            abstract="Health effects of early retirement",
            controlled=["social politics", "elderly people"],
            authors=["Hauser, Richard"],
        ),
        make_doc(
            "d2",
            title="Health care reform",
            abstract="Pension and welfare policy",
            controlled=["health care"],
            authors=["Hauser, Richard", "Bäcker, Gerhard"],
        ),
        make_doc(
            "d3",
            title="Labor market policy",
            abstract="Income and poverty",
            controlled=["social politics"],
            authors=["Bäcker, Gerhard"],
        ),
        make_doc(
            "d4",
            title="Retirement income",
            abstract="Pension schemes in europe",
            controlled=["pension scheme", "old age"],
            authors=["Meier, Anna"],
        ),
    ]
