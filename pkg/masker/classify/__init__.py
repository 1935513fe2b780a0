from masker.classify.heads import SentimentHead, sentiment_logits
from masker.classify.losses import (
    Loss,
    LossBundle,
    LossWeights,
    aux_sentiment_losses,
    main_sentiment_loss,
    total_loss,
)
